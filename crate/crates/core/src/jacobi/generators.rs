use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::JacobiFormQExp;
use crate::arith::{eisenstein_qexp, QExpansion, Rational};
use crate::error::{Error, Result};

/// Integer bivariate series with row `n` stored over `|r| <= radius[n]`.
struct Grid {
    radius: Vec<i64>,
    rows: Vec<Vec<BigInt>>,
}

impl Grid {
    fn new(radius: Vec<i64>) -> Self {
        let rows = radius
            .iter()
            .map(|r| vec![BigInt::zero(); 2 * *r as usize + 1])
            .collect();
        Grid { radius, rows }
    }

    fn get(&self, n: usize, r: i64) -> Option<&BigInt> {
        let rad = self.radius[n];
        (r.abs() <= rad).then(|| &self.rows[n][(r + rad) as usize])
    }

    fn add(&mut self, n: usize, r: i64, v: &BigInt) {
        let rad = self.radius[n];
        assert!(r.abs() <= rad, "term ({n}, {r}) escapes the grid");
        self.rows[n][(r + rad) as usize] += v;
    }

    /// In place multiplication by `1 + sign q^d zeta^s`.
    fn times_binomial(&mut self, d: usize, s: i64, sign: i64) {
        for n in (d..self.rows.len()).rev() {
            let rad = self.radius[n - d];
            for j in 0..self.rows[n - d].len() {
                let v = &self.rows[n - d][j];
                if v.is_zero() {
                    continue;
                }
                let v = v * sign;
                self.add(n, j as i64 - rad + s, &v);
            }
        }
    }

    /// In place multiplication by `1 / (1 - q^d)`.
    fn divide_by(&mut self, d: usize) {
        for n in d..self.rows.len() {
            let rad = self.radius[n - d];
            for j in 0..self.rows[n - d].len() {
                let v = self.rows[n - d][j].clone();
                if !v.is_zero() {
                    self.add(n, j as i64 - rad, &v);
                }
            }
        }
    }

    fn multiply(&self, other: &Grid, radius: Vec<i64>) -> Grid {
        let mut out = Grid::new(radius);
        let len = out.rows.len();
        for n1 in 0..len.min(self.rows.len()) {
            for (j1, x) in self.rows[n1].iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let r1 = j1 as i64 - self.radius[n1];
                for n2 in 0..(len - n1).min(other.rows.len()) {
                    for (j2, y) in other.rows[n2].iter().enumerate() {
                        if !y.is_zero() {
                            out.add(n1 + n2, r1 + j2 as i64 - other.radius[n2], &(x * y));
                        }
                    }
                }
            }
        }
        out
    }

    fn into_form(self, weight: i64, index: u64) -> JacobiFormQExp {
        let prec = self.rows.len() as u64;
        let mut out = JacobiFormQExp::zero(weight, index, prec);
        for (n, row) in self.rows.into_iter().enumerate() {
            let rad = self.radius[n];
            for (j, v) in row.into_iter().enumerate() {
                if !v.is_zero() {
                    out.set(n as u64, j as i64 - rad, Rational::from_integer(v))
                        .expect("weak index-one support");
                }
            }
        }
        out
    }
}

fn index_one_radius(prec: usize) -> Vec<i64> {
    (0..prec as u64)
        .map(|n| JacobiFormQExp::radius(n, 1) + 1)
        .collect()
}

/// The weak Jacobi forms of index one and weights `-2` and `0`, normalized
/// so that their `q^0` rows are `zeta - 2 + zeta^{-1}` and
/// `zeta + 10 + zeta^{-1}`.
///
/// The first is `(zeta - 2 + zeta^{-1}) P` with
/// `P = prod (1 - q^n zeta)^2 (1 - q^n zeta^{-1})^2 / (1 - q^n)^4`; the second
/// is twelve times the first multiplied by the normalized Weierstrass
/// function, which expands to `phi + 12 W phi + 12 P` where
/// `W = sum_{n >= 1} sum_{d | n} d (zeta^d - 2 + zeta^{-d}) q^n`.
pub fn weak_generators(prec: u64) -> (JacobiFormQExp, JacobiFormQExp) {
    let len = prec as usize;
    let mut p = Grid::new(index_one_radius(len));
    if len > 0 {
        p.add(0, 0, &BigInt::one());
    }
    for d in 1..len {
        for _ in 0..2 {
            p.times_binomial(d, 1, -1);
            p.times_binomial(d, -1, -1);
        }
        for _ in 0..4 {
            p.divide_by(d);
        }
    }

    let mut phi_m2 = Grid::new(index_one_radius(len));
    for n in 0..len {
        let rad = p.radius[n];
        for (j, v) in p.rows[n].iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let r = j as i64 - rad;
            phi_m2.add(n, r + 1, v);
            phi_m2.add(n, r - 1, v);
            phi_m2.add(n, r, &(v * -2));
        }
    }

    // W has row n supported on |r| <= n
    let mut w = Grid::new((0..len as i64).collect());
    for d in 1..len as i64 {
        for n in (d..len as i64).step_by(d as usize) {
            let d_big = BigInt::from(d);
            w.add(n as usize, d, &d_big);
            w.add(n as usize, -d, &d_big);
            w.add(n as usize, 0, &(d_big * -2));
        }
    }
    // partial sums leave the index-one window before cancelling
    let wide: Vec<i64> = index_one_radius(len)
        .iter()
        .enumerate()
        .map(|(n, r)| n as i64 + r)
        .collect();
    let w_phi = w.multiply(&phi_m2, wide);
    for n in 0..len {
        let rad = phi_m2.radius[n];
        let mut outside = w_phi.rows[n]
            .iter()
            .enumerate()
            .filter(|(j, _)| (*j as i64 - w_phi.radius[n]).abs() > rad);
        assert!(outside.all(|(_, v)| v.is_zero()), "W phi escapes the window at q^{n}");
    }

    let mut phi_0 = Grid::new(index_one_radius(len));
    let twelve = BigInt::from(12);
    for n in 0..len {
        for r in -phi_0.radius[n]..=phi_0.radius[n] {
            let mut v = phi_m2.get(n, r).cloned().unwrap_or_default();
            if let Some(x) = w_phi.get(n, r) {
                v += x * &twelve;
            }
            if let Some(x) = p.get(n, r) {
                v += x * &twelve;
            }
            if !v.is_zero() {
                phi_0.add(n, r, &v);
            }
        }
    }

    (phi_m2.into_form(-2, 1), phi_0.into_form(0, 1))
}

/// Row reduction in place; returns pivot columns.
pub(crate) fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..width {
        let Some(p) = (next..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(next, p);
        let inv = Rational::one() / &rows[next][col];
        for x in rows[next].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != next && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                let (pivot_row, row) = if i < next {
                    let (a, b) = rows.split_at_mut(next);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&a[next], &mut b[0])
                };
                for (x, y) in row.iter_mut().zip(pivot_row) {
                    if !y.is_zero() {
                        *x -= &factor * y;
                    }
                }
            }
        }
        pivots.push(col);
        next += 1;
        if next == rows.len() {
            break;
        }
    }
    rows.truncate(next);
    pivots
}

/// Positions `(n, r)` of the index-one window in `(n, |r|, r)` order.
fn positions(prec: u64) -> Vec<(u64, i64)> {
    let mut out = Vec::new();
    for n in 0..prec {
        let rad = JacobiFormQExp::radius(n, 1);
        for a in 0..=rad {
            out.push((n, -a));
            if a != 0 {
                out.push((n, a));
            }
        }
    }
    out
}

fn elliptic_power(e4: &QExpansion<Rational>, e6: &QExpansion<Rational>, a: u32, b: u32, prec: u64) -> QExpansion<Rational> {
    let mut out = QExpansion::one(Rational::from_integer(BigInt::from(prec)));
    for _ in 0..a {
        out = out.mul(e4);
    }
    for _ in 0..b {
        out = out.mul(e6);
    }
    out
}

/// A basis of `J_{k,1}` (or its cusp subspace) to precision `prec`.
///
/// Candidates `E_4^a E_6^b phi_{-2,1}` and `E_4^a E_6^b phi_{0,1}` of weight
/// `k` are combined to kill every coefficient with `4n - r^2 < 0` (and
/// `= 0` for cusp forms). The basis is in reduced echelon form with respect
/// to the `(n, |r|, r)` order of coefficients, so each element has leading
/// coefficient one.
pub fn jacobi_space(k: i64, cusp: bool, prec: u64) -> Result<Vec<JacobiFormQExp>> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::UnsupportedWeight(k));
    }
    if prec == 0 {
        return Err(Error::InvalidArgument("prec must be positive".into()));
    }
    let (phi_m2, phi_0) = weak_generators(prec);
    let e4 = eisenstein_qexp(4, prec)?;
    let e6 = eisenstein_qexp(6, prec)?;
    let mut candidates = Vec::new();
    for (target, phi) in [(k + 2, &phi_m2), (k, &phi_0)] {
        for b in 0..=(target / 6) {
            let rest = target - 6 * b;
            if rest % 4 == 0 {
                let ell = elliptic_power(&e4, &e6, (rest / 4) as u32, b as u32, prec);
                candidates.push(JacobiFormQExp::from_elliptic(target, &ell)?.multiply(phi));
            }
        }
    }
    if candidates.is_empty() {
        return Ok(Vec::new());
    }

    let pos = positions(prec);
    let vectors: Vec<Vec<Rational>> = candidates
        .iter()
        .map(|g| {
            pos.iter()
                .map(|(n, r)| g.coeff(*n, *r).expect("within precision"))
                .collect()
        })
        .collect();
    let mut independent = vectors.clone();
    if rref(&mut independent).len() < candidates.len() {
        return Err(Error::InvalidArgument(format!(
            "precision {prec} is too low to separate the weight {k} generators"
        )));
    }

    // constraints: rows = forbidden positions, columns = candidates
    let forbidden: Vec<usize> = pos
        .iter()
        .enumerate()
        .filter(|(_, (n, r))| {
            let d = 4 * *n as i64 - r * r;
            d < 0 || (cusp && d == 0)
        })
        .map(|(i, _)| i)
        .collect();
    let mut system: Vec<Vec<Rational>> = forbidden
        .iter()
        .map(|&i| vectors.iter().map(|v| v[i].clone()).collect())
        .collect();
    let pivots = rref(&mut system);
    let free: Vec<usize> = (0..candidates.len())
        .filter(|c| !pivots.contains(c))
        .collect();
    let mut basis: Vec<Vec<Rational>> = free
        .iter()
        .map(|&f| {
            // kernel vector with x_f = 1 and pivot variables solved
            let mut x = vec![Rational::zero(); candidates.len()];
            x[f] = Rational::one();
            for (row, &p) in system.iter().zip(&pivots) {
                x[p] = -row[f].clone();
            }
            pos.iter()
                .enumerate()
                .map(|(i, _)| {
                    x.iter()
                        .zip(&vectors)
                        .filter(|(c, _)| !c.is_zero())
                        .map(|(c, v)| c * &v[i])
                        .sum()
                })
                .collect()
        })
        .collect();
    rref(&mut basis);
    basis
        .into_iter()
        .map(|v| {
            JacobiFormQExp::from_terms(
                k,
                1,
                prec,
                pos.iter()
                    .zip(v)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|((n, r), c)| (*n, *r, c)),
            )
        })
        .collect()
}
