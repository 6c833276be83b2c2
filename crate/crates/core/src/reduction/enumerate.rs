use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{Signed, ToPrimitive, Zero};

use super::matrix::{is_positive_definite, SymMatQ};
use crate::arith::{int, rational_to_f64, Rational};
use crate::error::{Error, Result};

/// Default size guard for enumerations.
pub const DEFAULT_CAP: usize = 1_000_000;

/// `b N^{8 s^2}` with `s = g - 1`.
pub fn diagonal_bound(n: u64, b: &Rational, g: usize) -> Rational {
    let s = (g - 1) as u32;
    b * Rational::from_integer(BigInt::from(n).pow(8 * s * s))
}

fn check_genus(g: usize) -> Result<usize> {
    if !(2..=4).contains(&g) {
        return Err(Error::UnsupportedGenus(g));
    }
    Ok(g - 1)
}

/// Integers `a >= 0` with `a < x` for a rational `x`, as an exclusive upper
/// end.
fn count_below(x: &Rational) -> BigInt {
    if !x.is_positive() {
        return BigInt::zero();
    }
    // ceil(x) is the first integer not below x
    x.ceil().to_integer()
}

/// Largest `a >= 0` with `a^2 < x`, or `None` if no such `a` exists.
fn isqrt_strict(x: &Rational) -> Option<BigInt> {
    if !x.is_positive() {
        return None;
    }
    let mut a = x.floor().to_integer().sqrt();
    while Rational::from_integer(&a * &a) >= *x {
        a -= 1;
    }
    while Rational::from_integer((&a + 1) * (&a + 1)) < *x {
        a += 1;
    }
    Some(a)
}

/// Positive definite `n` of size `g - 1` with `2 N^2 n_ij` integral and
/// `n_ii < b N^{8 (g-1)^2}`, in lexicographic order of the scaled upper
/// triangle.
pub fn enumerate_s(n: u64, b: &Rational, g: usize, cap: usize) -> Result<Vec<SymMatQ>> {
    let s = check_genus(g)?;
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    if !b.is_positive() {
        return Err(Error::InvalidArgument("b must be positive".into()));
    }
    let scale = 2 * n * n;
    let diag_end = count_below(&(diagonal_bound(n, b, g) * int(scale as i64)));
    // scaled diagonal entries run over 1..diag_end
    let diag_end: i64 = match diag_end.to_i64() {
        Some(d) if ((d - 1).max(0) as u128).pow(s as u32) <= cap as u128 => d,
        _ => return Err(Error::CapExceeded { cap }),
    };
    let scale_q = int(scale as i64);
    let mut out = Vec::new();
    let mut entries = vec![0i64; s * s];
    fill(
        &mut entries,
        s,
        0,
        diag_end,
        &scale_q,
        cap,
        &mut out,
    )?;
    Ok(out)
}

/// Upper-triangle positions in row-major order.
fn positions(s: usize) -> Vec<(usize, usize)> {
    (0..s)
        .flat_map(|i| (i..s).map(move |j| (i, j)))
        .collect()
}

fn fill(
    entries: &mut [i64],
    s: usize,
    pos: usize,
    diag_end: i64,
    scale: &Rational,
    cap: usize,
    out: &mut Vec<SymMatQ>,
) -> Result<()> {
    let slots = positions(s);
    if pos == slots.len() {
        let m = SymMatQ::new(
            s,
            entries.iter().map(|&a| int(a) / scale).collect(),
        )?;
        if is_positive_definite(&m) {
            if out.len() == cap {
                return Err(Error::CapExceeded { cap });
            }
            out.push(m);
        }
        return Ok(());
    }
    let (i, j) = slots[pos];
    let range = if i == j {
        1..diag_end
    } else {
        // |a_ij| < sqrt(a_ii a_jj) for definite forms, and a_jj is not yet
        // fixed, so bound by the diagonal range
        let lim = (entries[i * s + i] as i128 * diag_end as i128).sqrt() as i64 + 1;
        -lim..lim + 1
    };
    for a in range {
        entries[i * s + j] = a;
        entries[j * s + i] = a;
        fill(entries, s, pos + 1, diag_end, scale, cap, out)?;
    }
    Ok(())
}

/// Result of [`enumerate_r`].
#[derive(Clone, Debug, PartialEq)]
pub struct REnumeration {
    /// All admissible `r`, lexicographically ordered.
    pub vectors: Vec<Vec<Rational>>,
    /// `C` in `count <= C m^{(g-1)/2}`.
    pub count_constant: f64,
    /// `4 m b N^{8 (g-1)^2}`.
    pub square_bound: Rational,
}

impl REnumeration {
    pub fn count(&self) -> usize {
        self.vectors.len()
    }
}

/// `C = (8 N^2 sqrt(b N^{8 s^2}) + 1)^s`.
pub fn r_count_constant(n: u64, b: &Rational, g: usize) -> f64 {
    let s = (g - 1) as i32;
    let nf = n as f64;
    (8.0 * nf * nf * rational_to_f64(&diagonal_bound(n, b, g)).sqrt() + 1.0).powi(s)
}

/// All `r` in `(1/(2N^2)) Z^{g-1}` with `r_i^2 < 4 m b N^{8 (g-1)^2}`.
pub fn enumerate_r(m: u64, b: &Rational, n: u64, g: usize, cap: usize) -> Result<REnumeration> {
    let s = check_genus(g)?;
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    if b.is_negative() {
        return Err(Error::InvalidArgument("b must be nonnegative".into()));
    }
    let scale = int((2 * n * n) as i64);
    let square_bound = int(4 * m as i64) * diagonal_bound(n, b, g);
    let count_constant = r_count_constant(n, b, g);
    let coords: Vec<Rational> = match isqrt_strict(&(&square_bound * &scale * &scale)) {
        None => Vec::new(),
        Some(a) => {
            let a = a
                .to_i64()
                .filter(|a| (2 * *a as u128 + 1).pow(s as u32) <= cap as u128)
                .ok_or(Error::CapExceeded { cap })?;
            (-a..=a).map(|x| int(x) / &scale).collect()
        }
    };
    let mut vectors: Vec<Vec<Rational>> = vec![Vec::new()];
    for _ in 0..s {
        vectors = vectors
            .into_iter()
            .flat_map(|prefix| {
                coords.iter().map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c.clone());
                    v
                })
            })
            .collect();
    }
    if coords.is_empty() {
        vectors.clear();
    }
    Ok(REnumeration {
        vectors,
        count_constant,
        square_bound,
    })
}

/// Membership test for the set enumerated by [`enumerate_s`].
pub fn in_s(x: &SymMatQ, n: u64, b: &Rational, g: usize) -> bool {
    let scale = int((2 * n * n) as i64);
    let bound = diagonal_bound(n, b, g);
    x.size() + 1 == g
        && is_positive_definite(x)
        && x.entries().iter().all(|e| (e * &scale).is_integer())
        && (0..x.size()).all(|i| x.get(i, i) < &bound)
}

/// Membership test for the set enumerated by [`enumerate_r`].
pub fn in_r(r: &[Rational], m: u64, b: &Rational, n: u64, g: usize) -> bool {
    let scale = int((2 * n * n) as i64);
    let bound = int(4 * m as i64) * diagonal_bound(n, b, g);
    r.len() + 1 == g && r.iter().all(|x| (x * &scale).is_integer() && x * x < bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use std::collections::BTreeSet;

    #[test]
    fn genus_two_examples() {
        let s = enumerate_s(1, &int(1), 2, DEFAULT_CAP).unwrap();
        assert_eq!(s, vec![SymMatQ::scalar(rat(1, 2))]);
        let s = enumerate_s(1, &int(2), 2, DEFAULT_CAP).unwrap();
        let expected: Vec<SymMatQ> = [rat(1, 2), int(1), rat(3, 2)]
            .into_iter()
            .map(SymMatQ::scalar)
            .collect();
        assert_eq!(s, expected);
    }

    #[test]
    fn n_two_matches_independent_enumeration() {
        for b in [int(1), rat(1, 3), rat(5, 2)] {
            let got = enumerate_s(2, &b, 2, DEFAULT_CAP).unwrap();
            // oracle: k/8 for k = 1, 2, ... while k/8 < 256 b
            let mut expected = Vec::new();
            let mut k = 1;
            while rat(k, 8) < int(256) * &b {
                expected.push(SymMatQ::scalar(rat(k, 8)));
                k += 1;
            }
            assert_eq!(got, expected);
        }
        assert_eq!(enumerate_s(2, &int(1), 2, DEFAULT_CAP).unwrap().len(), 2047);
    }

    #[test]
    fn size_two_set_is_closed_and_ordered() {
        let got = enumerate_s(1, &int(1), 3, DEFAULT_CAP).unwrap();
        // scaled entries a, c in {1}, |b| < 1: only [[1/2, 0], [0, 1/2]]
        assert_eq!(got, vec![SymMatQ::parse("1/2,0;0,1/2").unwrap()]);
        let got = enumerate_s(1, &int(2), 3, DEFAULT_CAP).unwrap();
        let unique: BTreeSet<_> = got.iter().cloned().collect();
        assert_eq!(unique.len(), got.len());
        assert!(got.iter().all(|x| in_s(x, 1, &int(2), 3)));
        // brute force over scaled entries in a box
        let mut count = 0;
        for a in 1..4 {
            for bb in -4..5 {
                for c in 1..4 {
                    let x = SymMatQ::parse(&format!("{a}/2,{bb}/2;{bb}/2,{c}/2")).unwrap();
                    if in_s(&x, 1, &int(2), 3) {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, got.len());
        let keys: Vec<Vec<Rational>> = got.iter().map(SymMatQ::upper).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate_s(2, &int(1), 3, DEFAULT_CAP),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            enumerate_s(2, &int(1), 2, 100),
            Err(Error::CapExceeded { cap: 100 })
        ));
    }

    #[test]
    fn r_examples() {
        let r = enumerate_r(1, &rat(1, 16), 1, 2, DEFAULT_CAP).unwrap();
        assert_eq!(r.vectors, vec![vec![int(0)]]);
        let r = enumerate_r(1, &int(0), 1, 2, DEFAULT_CAP).unwrap();
        assert!(r.vectors.is_empty());
        // oracle: direct inequality check over a candidate window
        let r = enumerate_r(3, &int(1), 1, 2, DEFAULT_CAP).unwrap();
        let expected: Vec<Vec<Rational>> = (-20..=20)
            .map(|k| vec![rat(k, 2)])
            .filter(|v| &v[0] * &v[0] < int(12))
            .collect();
        assert_eq!(r.vectors, expected);
    }

    #[test]
    fn r_count_grows_like_sqrt_m() {
        let b = int(1);
        let mut ratios = Vec::new();
        for m in 1..=100u64 {
            let r = enumerate_r(m, &b, 1, 2, DEFAULT_CAP).unwrap();
            assert!(r.vectors.iter().all(|v| in_r(v, m, &b, 1, 2)));
            let ratio = r.count() as f64 / (m as f64).sqrt();
            assert!(ratio <= r.count_constant, "m = {m}");
            ratios.push(ratio);
        }
        let max = ratios.iter().cloned().fold(0.0, f64::max);
        let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(max / min < 2.0);
    }

    #[test]
    fn size_two_r_vectors() {
        let r = enumerate_r(1, &rat(1, 4), 1, 3, DEFAULT_CAP).unwrap();
        // r_i^2 < 1 with r_i in (1/2)Z
        assert_eq!(r.count(), 9);
        assert!(r.count() as f64 <= r.count_constant);
    }
}
