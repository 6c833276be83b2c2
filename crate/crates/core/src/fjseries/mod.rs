//! Symmetric formal Fourier-Jacobi series of cogenus one in genus two.

mod lift;
mod poly;
mod symmetry;
mod table;

pub use lift::{gritsenko_lift, lift_from_table, lift_slice, siegel_eisenstein};
pub use poly::{monicize, poly_eval, PolynomialOverM};
pub use symmetry::{
    orbit_representative, SymmetryGenerator, SymmetryReport, SymmetryViolation,
};
pub use table::{evaluate_partial, extract_phi_m, CoefficientTable, SiegelPoint};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::jacobi::JacobiFormQExp;
use crate::reduction::HalfIntIndex;

/// `f = sum_{m <= M_max} phi_m(tau1, z) q2^m` with `phi_m` of weight `k` and
/// index `m`, all known to the same precision in `q1`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalFJ {
    weight: i64,
    precision: u64,
    phis: Vec<JacobiFormQExp>,
}

impl FormalFJ {
    pub fn new(weight: i64, phis: Vec<JacobiFormQExp>) -> Result<Self> {
        let precision = phis
            .first()
            .ok_or_else(|| Error::InvalidArgument("a series needs the m = 0 slice".into()))?
            .precision();
        for (m, phi) in phis.iter().enumerate() {
            if phi.index() != m as u64 {
                return Err(Error::IndexMismatch {
                    expected: m as u64,
                    got: phi.index(),
                });
            }
            if phi.weight() != weight {
                return Err(Error::WeightMismatch {
                    left: weight,
                    right: phi.weight(),
                });
            }
            if phi.precision() != precision {
                return Err(Error::InvalidArgument(format!(
                    "slice {m} has precision {}, slice 0 has {precision}",
                    phi.precision()
                )));
            }
        }
        Ok(FormalFJ {
            weight,
            precision,
            phis,
        })
    }

    pub fn zero(weight: i64, m_max: u64, precision: u64) -> Self {
        FormalFJ {
            weight,
            precision,
            phis: (0..=m_max)
                .map(|m| JacobiFormQExp::zero(weight, m, precision))
                .collect(),
        }
    }

    /// The constant series `1` of weight zero.
    pub fn one(m_max: u64, precision: u64) -> Self {
        let mut out = Self::zero(0, m_max, precision);
        out.phis[0] = JacobiFormQExp::one(precision);
        out
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn m_max(&self) -> u64 {
        self.phis.len() as u64 - 1
    }

    pub fn precision(&self) -> u64 {
        self.precision
    }

    pub fn phis(&self) -> &[JacobiFormQExp] {
        &self.phis
    }

    pub fn phi(&self, m: u64) -> Result<&JacobiFormQExp> {
        self.phis.get(m as usize).ok_or_else(|| Error::OutOfPrecision {
            what: format!("phi_{m}"),
            precision: format!("M_max = {}", self.m_max()),
        })
    }

    /// `c(f; t)` for `t = [[n, r/2], [r/2, m]]`.
    ///
    /// Zero for non-integral or indefinite `t`; an error when `m > M_max` or
    /// `n` is at or above the precision.
    pub fn coeff(&self, t: &HalfIntIndex) -> Result<Rational> {
        let m = t.m.to_u64().filter(|m| *m <= self.m_max()).ok_or_else(|| {
            Error::OutOfPrecision {
                what: format!("c(f; {t})"),
                precision: format!("M_max = {}", self.m_max()),
            }
        })?;
        if t.n >= Rational::from_integer(BigInt::from(self.precision)) {
            return Err(Error::OutOfPrecision {
                what: format!("c(f; {t})"),
                precision: self.precision.to_string(),
            });
        }
        match t.as_integers() {
            Some((n, r, _)) if t.is_semidefinite() => self.phis[m as usize].coeff(n as u64, r),
            _ => Ok(Rational::zero()),
        }
    }

    /// `c(f; n, r, m)`, or `None` outside the known range.
    pub fn coeff_nrm(&self, n: i64, r: i64, m: i64) -> Option<Rational> {
        if m < 0 || n < 0 {
            return Some(Rational::zero());
        }
        if m as u64 > self.m_max() || n as u64 >= self.precision {
            return None;
        }
        if 4 * n * m < r * r {
            return Some(Rational::zero());
        }
        Some(
            self.phis[m as usize]
                .get(n as u64, r)
                .cloned()
                .unwrap_or_else(Rational::zero),
        )
    }

    pub fn is_cuspidal(&self) -> bool {
        self.phis[0].is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.phis.iter().all(JacobiFormQExp::is_zero)
    }

    /// Keeps `m <= m_max` and `n < precision`.
    pub fn truncate(&self, m_max: u64, precision: u64) -> Self {
        let precision = precision.min(self.precision);
        FormalFJ {
            weight: self.weight,
            precision,
            phis: self.phis[..=(m_max.min(self.m_max()) as usize)]
                .iter()
                .map(|phi| phi.truncate(precision))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.weight != other.weight {
            return Err(Error::WeightMismatch {
                left: self.weight,
                right: other.weight,
            });
        }
        let phis = self
            .phis
            .iter()
            .zip(&other.phis)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.weight, phis)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scalar_mul(&-Rational::one()))
    }

    pub fn scalar_mul(&self, q: &Rational) -> Self {
        FormalFJ {
            weight: self.weight,
            precision: self.precision,
            phis: self.phis.iter().map(|phi| phi.scale(q)).collect(),
        }
    }

    /// `(f g)_m = sum_{m1 + m2 = m} phi_{m1} psi_{m2}`; `M_max` and the
    /// precision are the smaller of the two.
    pub fn multiply(&self, other: &Self) -> Self {
        let m_max = self.m_max().min(other.m_max());
        let precision = self.precision.min(other.precision);
        let weight = self.weight + other.weight;
        let phis = (0..=m_max)
            .into_par_iter()
            .map(|m| {
                let mut acc = JacobiFormQExp::zero(weight, m, precision);
                for m1 in 0..=m {
                    let (a, b) = (&self.phis[m1 as usize], &other.phis[(m - m1) as usize]);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.multiply(b)).expect("same weight and index");
                }
                acc
            })
            .collect();
        FormalFJ {
            weight,
            precision,
            phis,
        }
    }

    /// Audits `c(f; t[u]) = det(u)^k c(f; t)` over the known coefficients
    /// with `0 <= n, m <= bound` and `|r| <= 2 bound`, orbit by orbit.
    pub fn check_symmetry(&self, bound: u64) -> SymmetryReport {
        symmetry::audit(self, bound)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.weight,
            "M_max": self.m_max(),
            "phis": self.phis.iter().map(JacobiFormQExp::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let weight = v
            .get("k")
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::Parse("series record needs an integer \"k\"".into()))?;
        let m_max = v
            .get("M_max")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("series record needs an integer \"M_max\"".into()))?;
        let phis = v
            .get("phis")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("series record needs a \"phis\" array".into()))?
            .iter()
            .map(JacobiFormQExp::from_json)
            .collect::<Result<Vec<_>>>()?;
        if phis.len() as u64 != m_max + 1 {
            return Err(Error::Parse(format!(
                "M_max = {m_max} but {} slices given",
                phis.len()
            )));
        }
        Self::new(weight, phis).map_err(|e| Error::Parse(e.to_string()))
    }
}
