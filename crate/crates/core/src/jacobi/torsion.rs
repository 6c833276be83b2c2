use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Roots;
use serde_json::{json, Value};

use super::JacobiFormQExp;
use crate::arith::{rat, ComplexVal, CycElem, QExpansion, Rational};
use crate::error::{Error, Result};
use crate::reduction::SymMatQ;

/// A torsion point `tau lambda + mu` with `lambda = a / N`, `mu = b / N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionPoint {
    pub n: u64,
    pub lambda: Vec<i64>,
    pub mu: Vec<i64>,
}

impl TorsionPoint {
    pub fn new(n: u64, lambda: Vec<i64>, mu: Vec<i64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("N must be at least 1".into()));
        }
        if lambda.len() != mu.len() {
            return Err(Error::SizeMismatch(format!(
                "lambda has {} entries, mu has {}",
                lambda.len(),
                mu.len()
            )));
        }
        Ok(TorsionPoint { n, lambda, mu })
    }

    pub fn lambda_rational(&self) -> Vec<Rational> {
        self.lambda.iter().map(|a| rat(*a, self.n as i64)).collect()
    }

    pub fn mu_rational(&self) -> Vec<Rational> {
        self.mu.iter().map(|b| rat(*b, self.n as i64)).collect()
    }
}

/// `eta(tau) = e(m lambda^2 tau) phi(tau, lambda tau + mu)` as a series in
/// `q^{1/N^2}` with cyclotomic coefficients of order `N^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecializedExpansion {
    pub weight: i64,
    pub level: u64,
    pub expansion: QExpansion<CycElem>,
}

impl SpecializedExpansion {
    pub fn coefficient(&self, exponent: &Rational) -> Result<CycElem> {
        self.expansion.coefficient(exponent)
    }

    pub fn precision(&self) -> &Rational {
        self.expansion.precision()
    }

    pub fn evaluate(&self, tau: ComplexVal) -> ComplexVal {
        self.expansion.evaluate(tau)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.weight,
            "level": self.level,
            "expansion": self.expansion.to_json(),
        })
    }
}

/// Smallest `N^2 n + N r a + m a^2` over `n >= prec` and `r^2 <= 4 n m`.
///
/// The exponent is minimized by `r = -sign(a) isqrt(4nm)`; past the minimum
/// of `(N sqrt(n) - |a| sqrt(m))^2` this lower bound only grows, so the scan
/// stops once it exceeds the running minimum.
fn truncation_numerator(prec: u64, m: u64, n_level: u64, a: i64) -> u128 {
    let (nl, a, m) = (n_level as u128, a.unsigned_abs() as u128, m as u128);
    let exponent = |n: u128| nl * nl * n + a * a * m - nl * a * (4 * n * m).sqrt();
    let mut best = exponent(prec as u128);
    let mut n = prec as u128;
    loop {
        n += 1;
        let lead = nl * nl * n;
        if lead >= a * a * m {
            // (N sqrt(n) - a sqrt(m))^2 >= best  <=>  x >= 0, x^2 >= 4 N^2 a^2 n m
            if let Some(x) = (lead + a * a * m).checked_sub(best) {
                if x * x >= 4 * nl * nl * a * a * n * m {
                    return best;
                }
            }
        }
        best = best.min(exponent(n));
    }
}

/// Smallest slice precision at which the specialization of an index `m`
/// form at `point` is known for every exponent up to and including `bound`.
pub fn required_slice_precision(m: u64, point: &TorsionPoint, bound: &Rational) -> Result<u64> {
    if point.lambda.len() != 1 {
        return Err(Error::UnsupportedGenus(point.lambda.len() + 1));
    }
    let level = Rational::from_integer(BigInt::from(point.n * point.n));
    let target = bound * level;
    let (mut lo, mut hi) = (1u64, 1u64);
    let known = |prec: u64| {
        Rational::from_integer(BigInt::from(truncation_numerator(prec, m, point.n, point.lambda[0])))
            > target
    };
    while !known(hi) {
        lo = hi + 1;
        hi *= 2;
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if known(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(hi)
}

/// Specializes a holomorphic Jacobi form of scalar index at a torsion point.
///
/// The exponent of `q_1` attached to `c(n, r)` is
/// `(N^2 n + N r a + m a^2) / N^2`, always nonnegative for holomorphic
/// forms, and the coefficient picks up `e(r b / N)`. The precision is the
/// smallest exponent any unknown coefficient could reach.
pub fn specialize_torsion(phi: &JacobiFormQExp, point: &TorsionPoint) -> Result<SpecializedExpansion> {
    if point.lambda.len() != 1 {
        return Err(Error::UnsupportedGenus(point.lambda.len() + 1));
    }
    if !phi.is_holomorphic() {
        return Err(Error::NotHolomorphic);
    }
    let (nl, a, b) = (point.n as i128, point.lambda[0] as i128, point.mu[0] as i128);
    let m = phi.index() as i128;
    let level = point.n * point.n;
    let mut acc: BTreeMap<u64, CycElem> = BTreeMap::new();
    for (n, r, c) in phi.terms() {
        let e = nl * nl * n as i128 + nl * r as i128 * a + m * a * a;
        debug_assert!(e >= 0);
        let root = (r as i128 * b * nl).rem_euclid(level as i128) as i64;
        acc.entry(e as u64)
            .or_insert_with(|| CycElem::zero(level))
            .add_term(root, c.clone());
    }
    let prec_num = truncation_numerator(phi.precision(), phi.index(), point.n, point.lambda[0]);
    let precision = Rational::new(BigInt::from(prec_num), BigInt::from(level));
    Ok(SpecializedExpansion {
        weight: phi.weight(),
        level,
        expansion: QExpansion::from_terms(level, precision, acc),
    })
}

/// `sum_{n in S} |eta(n)|` over scalar `n`.
pub fn fe_norm(eta: &SpecializedExpansion, s: &[SymMatQ]) -> Result<f64> {
    s.iter()
        .map(|x| {
            if x.size() != 1 {
                return Err(Error::SizeMismatch(format!(
                    "expected scalar indices, got size {}",
                    x.size()
                )));
            }
            Ok(eta.coefficient(x.get(0, 0))?.eval().norm())
        })
        .sum()
}
