use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::JacobiFormQExp;
use crate::arith::Rational;
use crate::error::{Error, Result};

/// Coefficients `c(D)` of a holomorphic Jacobi form of index one, where
/// `c(n, r) = c(4n - r^2)`, known for `0 <= D < d_bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexOneCoeffs {
    weight: i64,
    values: Vec<Rational>,
}

impl IndexOneCoeffs {
    pub fn new(weight: i64, values: Vec<Rational>) -> Self {
        IndexOneCoeffs { weight, values }
    }

    /// Reads the table off a form of precision `P`, giving `d_bound = 4P - 1`.
    ///
    /// Fails unless the form is holomorphic of index one with coefficients
    /// depending only on the discriminant.
    pub fn from_form(phi: &JacobiFormQExp) -> Result<Self> {
        if phi.index() != 1 {
            return Err(Error::IndexMismatch {
                expected: 1,
                got: phi.index(),
            });
        }
        if !phi.is_holomorphic() {
            return Err(Error::NotHolomorphic);
        }
        let bound = (4 * phi.precision()).saturating_sub(1) as usize;
        let mut values: Vec<Option<Rational>> = vec![None; bound];
        for n in 0..phi.precision() {
            for r in -JacobiFormQExp::radius(n, 1)..=JacobiFormQExp::radius(n, 1) {
                let d = 4 * n as i64 - r * r;
                if d < 0 {
                    continue;
                }
                let c = phi.coeff(n, r)?;
                if d as usize >= bound {
                    continue;
                }
                match &values[d as usize] {
                    None => values[d as usize] = Some(c),
                    Some(prev) if *prev == c => {}
                    Some(prev) => {
                        return Err(Error::InvalidArgument(format!(
                            "c({n}, {r}) = {c} differs from {prev} at discriminant {d}"
                        )))
                    }
                }
            }
        }
        Ok(IndexOneCoeffs {
            weight: phi.weight(),
            values: values.into_iter().map(Option::unwrap_or_default).collect(),
        })
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    /// Exclusive upper end of the known discriminants.
    pub fn d_bound(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn get(&self, d: u64) -> Result<&Rational> {
        self.values
            .get(d as usize)
            .ok_or_else(|| Error::OutOfPrecision {
                what: format!("c(D) at D = {d}"),
                precision: format!("D < {}", self.values.len()),
            })
    }

    pub fn scale(&self, q: &Rational) -> Self {
        IndexOneCoeffs {
            weight: self.weight,
            values: self.values.iter().map(|c| c * q).collect(),
        }
    }

    /// The form itself to precision `prec`; needs `4 (prec - 1) < d_bound`.
    pub fn to_form(&self, prec: u64) -> Result<JacobiFormQExp> {
        if prec > 0 && 4 * (prec - 1) >= self.d_bound() {
            return Err(Error::OutOfPrecision {
                what: format!("index-one form to q^{prec}"),
                precision: format!("D < {}", self.d_bound()),
            });
        }
        let mut out = JacobiFormQExp::zero(self.weight, 1, prec);
        for n in 0..prec {
            let rad = (4 * n).isqrt() as i64;
            for r in -rad..=rad {
                let c = &self.values[(4 * n as i64 - r * r) as usize];
                if !c.is_zero() {
                    out.set(n, r, c.clone())?;
                }
            }
        }
        Ok(out)
    }
}

fn chi4(r: i64) -> i64 {
    match r.rem_euclid(4) {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

/// `prod_{n >= 1} (1 - q^n)^18` to `len` terms, as the sixth power of
/// `prod (1 - q^n)^3 = sum_k (-1)^k (2k + 1) q^{k(k+1)/2}`.
fn eta_power_18(len: usize) -> Vec<BigInt> {
    let cube: Vec<(usize, i64)> = (0..)
        .map(|k: usize| (k * (k + 1) / 2, if k % 2 == 0 { 1 } else { -1 } * (2 * k as i64 + 1)))
        .take_while(|(e, _)| *e < len)
        .collect();
    let mut out = vec![BigInt::zero(); len];
    if len > 0 {
        out[0] = BigInt::one();
    }
    for _ in 0..6 {
        let mut next = vec![BigInt::zero(); len];
        for (i, x) in out.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (e, c) in &cube {
                if i + e >= len {
                    break;
                }
                next[i + e] += x * c;
            }
        }
        out = next;
    }
    out
}

/// The weight ten index one cusp form as `eta^18 theta^2`, where
/// `theta = sum_{r odd} chi_{-4}(r) q^{r^2/8} zeta^{r/2}`, normalized to
/// `c(4) = 1` and tabulated for `D < d_bound`.
pub fn weight_ten_cusp_table(d_bound: u64) -> IndexOneCoeffs {
    let d_bound = d_bound.max(5) as usize;
    // the largest eta index needed is n - 1 with n = (D + 1) / 4
    let len = d_bound / 4 + 2;
    let eta = eta_power_18(len);
    let raw = |d: usize| -> BigInt {
        let (n, r) = match d % 4 {
            0 => (d as i64 / 4, 0i64),
            3 => ((d as i64 + 1) / 4, 1),
            _ => return BigInt::zero(),
        };
        let mut total = BigInt::zero();
        // 8 j = 8 n - 6 - r1^2 - r2^2 with r2 = 2r - r1
        let lim = (8 * n).isqrt() + 1;
        for r1 in (-lim..=lim).filter(|r1| r1 % 2 != 0) {
            let r2 = 2 * r - r1;
            let eight_j = 8 * n - 6 - r1 * r1 - r2 * r2;
            if eight_j >= 0 && eight_j % 8 == 0 {
                total += &eta[(eight_j / 8) as usize] * (chi4(r1) * chi4(r2));
            }
        }
        total
    };
    let norm = Rational::from_integer(raw(4));
    let values = (0..d_bound)
        .map(|d| Rational::from_integer(raw(d)) / &norm)
        .collect();
    IndexOneCoeffs { weight: 10, values }
}
