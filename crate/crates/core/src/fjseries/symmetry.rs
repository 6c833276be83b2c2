use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::FormalFJ;
use crate::arith::{format_rational, Rational};
use crate::reduction::IntMatrix;

/// Generators of `GL_2(Z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryGenerator {
    Swap,
    Reflection,
    Shear,
}

impl SymmetryGenerator {
    pub const ALL: [SymmetryGenerator; 3] = [Self::Swap, Self::Reflection, Self::Shear];

    pub fn matrix(self) -> IntMatrix {
        let rows = match self {
            Self::Swap => [[0, 1], [1, 0]],
            Self::Reflection => [[1, 0], [0, -1]],
            Self::Shear => [[1, 0], [1, 1]],
        };
        IntMatrix::from_rows(&rows.map(|r| r.to_vec())).expect("2x2")
    }

    pub fn det(self) -> i64 {
        match self {
            Self::Shear => 1,
            _ => -1,
        }
    }

    /// `t[u] = u^T t u` on `t = (n, r, m)`.
    pub fn image(self, n: i64, r: i64, m: i64) -> (i64, i64, i64) {
        match self {
            Self::Swap => (m, r, n),
            Self::Reflection => (n, -r, m),
            Self::Shear => (n + r + m, r + 2 * m, m),
        }
    }
}

/// Reduced representative `0 <= r <= n <= m` of the `GL_2(Z)` orbit of a
/// positive semidefinite `t = (n, r, m)`, with `u` such that `t[u]` is the
/// representative. `None` for indefinite `t`.
pub fn orbit_representative(n: i64, r: i64, m: i64) -> Option<((i64, i64, i64), IntMatrix)> {
    if 4 * n * m < r * r || n < 0 || m < 0 {
        return None;
    }
    let (mut n, mut r, mut m) = (n, r, m);
    // u is the product of the steps in the order they are applied
    let mut u = [[1i64, 0], [0, 1]];
    let apply = |u: &mut [[i64; 2]; 2], step: [[i64; 2]; 2]| {
        *u = [
            [
                u[0][0] * step[0][0] + u[0][1] * step[1][0],
                u[0][0] * step[0][1] + u[0][1] * step[1][1],
            ],
            [
                u[1][0] * step[0][0] + u[1][1] * step[1][0],
                u[1][0] * step[0][1] + u[1][1] * step[1][1],
            ],
        ];
    };
    loop {
        if n > m {
            (n, m) = (m, n);
            apply(&mut u, [[0, 1], [1, 0]]);
            continue;
        }
        if n > 0 && (r > n || r < -n) {
            // [[1, -k], [0, 1]] sends r to r - 2kn, landing in [-n, n)
            let k = (r + n).div_euclid(2 * n);
            m = m - k * r + k * k * n;
            r -= 2 * k * n;
            apply(&mut u, [[1, -k], [0, 1]]);
            continue;
        }
        if r < 0 {
            r = -r;
            apply(&mut u, [[1, 0], [0, -1]]);
            continue;
        }
        break;
    }
    let u = IntMatrix::from_rows(&[u[0].to_vec(), u[1].to_vec()]).expect("2x2");
    Some(((n, r, m), u))
}

/// A reduced `t` fixed by some `u` of determinant `-1`.
fn has_improper_automorphism((n, r, m): (i64, i64, i64)) -> bool {
    r == 0 || r == n || n == m
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryViolation {
    pub t: (i64, i64, i64),
    /// `t[u]` is the reduced representative of the orbit of `t`.
    pub u: IntMatrix,
    /// The stored `c(f; t)`.
    pub lhs: Rational,
    /// `det(u)^k c(f; t[u])` with `c(f; t[u])` the orbit's consensus value.
    pub rhs: Rational,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SymmetryReport {
    /// Coefficients compared against their orbit.
    pub checked: usize,
    /// Coefficients alone in their orbit within range, or indefinite.
    pub skipped: usize,
    pub violations: Vec<SymmetryViolation>,
}

impl SymmetryReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "checked": self.checked,
            "skipped": self.skipped,
            "violations": self.violations.iter().map(|v| json!({
                "t": [v.t.0, v.t.1, v.t.2],
                "u": v.u.to_string(),
                "lhs": format_rational(&v.lhs),
                "rhs": format_rational(&v.rhs),
            })).collect::<Vec<_>>(),
        })
    }
}

struct Member {
    t: (i64, i64, i64),
    u: IntMatrix,
    sign: i64,
    stored: Rational,
}

/// Groups the known coefficients with `0 <= n, m <= bound`,
/// `|r| <= 2 bound` into `GL_2(Z)` orbits and compares each with the value
/// most members agree on after the `det(u)^k` twist. Ties go to the
/// representative's own value when it is known. For odd `k`, orbits with an
/// improper automorphism must vanish.
pub(super) fn audit(f: &FormalFJ, bound: u64) -> SymmetryReport {
    let b = bound as i64;
    let odd = f.weight().rem_euclid(2) == 1;
    let mut report = SymmetryReport::default();
    let mut orbits: BTreeMap<(i64, i64, i64), Vec<Member>> = BTreeMap::new();
    for m in 0..=b {
        for n in 0..=b {
            for r in -2 * b..=2 * b {
                let Some(stored) = f.coeff_nrm(n, r, m) else {
                    continue;
                };
                let Some((rep, u)) = orbit_representative(n, r, m) else {
                    report.skipped += 1;
                    continue;
                };
                let sign = if odd { u.det().expect("2x2") } else { 1 };
                orbits.entry(rep).or_default().push(Member {
                    t: (n, r, m),
                    u,
                    sign,
                    stored,
                });
            }
        }
    }
    for (rep, members) in orbits {
        let forced_zero = odd && has_improper_automorphism(rep);
        if members.len() < 2 && !forced_zero {
            report.skipped += members.len();
            continue;
        }
        report.checked += members.len();
        let consensus = if forced_zero {
            Rational::default()
        } else {
            consensus(rep, &members)
        };
        for member in members {
            let expected = &consensus * Rational::from_integer(member.sign.into());
            if member.stored != expected {
                report.violations.push(SymmetryViolation {
                    t: member.t,
                    u: member.u,
                    lhs: member.stored,
                    rhs: expected,
                });
            }
        }
    }
    report
}

fn consensus(rep: (i64, i64, i64), members: &[Member]) -> Rational {
    let twisted = |m: &Member| &m.stored * Rational::from_integer(m.sign.into());
    let mut votes: BTreeMap<Rational, usize> = BTreeMap::new();
    for m in members {
        *votes.entry(twisted(m)).or_default() += 1;
    }
    let top = *votes.values().max().expect("nonempty orbit");
    let leaders: Vec<&Rational> = votes.iter().filter(|(_, c)| **c == top).map(|(v, _)| v).collect();
    if leaders.len() > 1 {
        if let Some(own) = members.iter().find(|m| m.t == rep) {
            return twisted(own);
        }
    }
    leaders[0].clone()
}
