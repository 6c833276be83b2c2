//! Truncated Fourier expansions of Jacobi forms and their torsion
//! specializations.

mod generators;
mod index_one;
mod product;
mod torsion;

pub use generators::{jacobi_space, weak_generators};
pub use index_one::{weight_ten_cusp_table, IndexOneCoeffs};
pub use torsion::{
    fe_norm, required_slice_precision, specialize_torsion, SpecializedExpansion, TorsionPoint,
};

use std::f64::consts::TAU;

use num_integer::Roots;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::arith::{format_rational, parse_rational, rational_to_f64, ComplexVal, QExpansion, Rational};
use crate::error::{Error, Result};

/// Truncated expansion `sum c(n, r) q^n zeta^r` of weight `k` and index `m`.
///
/// Coefficients are known for every `n < precision`. Row `n` is stored
/// densely over `r^2 <= 4nm + m^2`, the support of weak Jacobi forms, which
/// is closed under products.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiFormQExp {
    weight: i64,
    index: u64,
    precision: u64,
    rows: Vec<Vec<Rational>>,
}

/// Value of a truncated series together with a crude bound for the omitted
/// terms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: ComplexVal,
    pub tail: f64,
}

impl JacobiFormQExp {
    /// Largest `|r|` stored in row `n`.
    pub fn radius(n: u64, m: u64) -> i64 {
        (4 * n * m + m * m).sqrt() as i64
    }

    pub fn zero(weight: i64, index: u64, precision: u64) -> Self {
        let rows = (0..precision)
            .map(|n| vec![Rational::zero(); 2 * Self::radius(n, index) as usize + 1])
            .collect();
        JacobiFormQExp {
            weight,
            index,
            precision,
            rows,
        }
    }

    /// The constant `1` of weight and index zero.
    pub fn one(precision: u64) -> Self {
        let mut out = Self::zero(0, 0, precision);
        if precision > 0 {
            out.rows[0][0] = Rational::one();
        }
        out
    }

    /// An elliptic modular form viewed as a Jacobi form of index zero.
    pub fn from_elliptic(weight: i64, f: &QExpansion<Rational>) -> Result<Self> {
        if f.denom() != 1 || !f.precision().is_integer() {
            return Err(Error::InvalidArgument(
                "elliptic input needs integral exponents and precision".into(),
            ));
        }
        let precision: u64 = f
            .precision()
            .to_integer()
            .try_into()
            .map_err(|_| Error::InvalidArgument("negative precision".into()))?;
        let mut out = Self::zero(weight, 0, precision);
        for (e, c) in f.terms() {
            out.rows[e as usize][0] = c.clone();
        }
        Ok(out)
    }

    pub fn from_terms(
        weight: i64,
        index: u64,
        precision: u64,
        terms: impl IntoIterator<Item = (u64, i64, Rational)>,
    ) -> Result<Self> {
        let mut out = Self::zero(weight, index, precision);
        for (n, r, c) in terms {
            out.add_to(n, r, c)?;
        }
        Ok(out)
    }

    pub(crate) fn from_rows(weight: i64, index: u64, rows: Vec<Vec<Rational>>) -> Self {
        debug_assert!(rows
            .iter()
            .enumerate()
            .all(|(n, row)| row.len() == 2 * Self::radius(n as u64, index) as usize + 1));
        JacobiFormQExp {
            weight,
            index,
            precision: rows.len() as u64,
            rows,
        }
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn precision(&self) -> u64 {
        self.precision
    }

    pub(crate) fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn in_window(&self, n: u64, r: i64) -> bool {
        n < self.precision && r.abs() <= Self::radius(n, self.index)
    }

    fn slot(&self, n: u64, r: i64) -> usize {
        (r + Self::radius(n, self.index)) as usize
    }

    /// Stored coefficient, `None` outside the window.
    pub fn get(&self, n: u64, r: i64) -> Option<&Rational> {
        self.in_window(n, r)
            .then(|| &self.rows[n as usize][self.slot(n, r)])
    }

    /// `c(n, r)`; zero outside the weak support, an error at or above the
    /// precision.
    pub fn coeff(&self, n: u64, r: i64) -> Result<Rational> {
        if n >= self.precision {
            return Err(Error::OutOfPrecision {
                what: format!("c({n}, {r})"),
                precision: self.precision.to_string(),
            });
        }
        Ok(self.get(n, r).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn set(&mut self, n: u64, r: i64, c: Rational) -> Result<()> {
        if !self.in_window(n, r) {
            return Err(Error::InvalidArgument(format!(
                "({n}, {r}) lies outside the stored window of index {} and precision {}",
                self.index, self.precision
            )));
        }
        let slot = self.slot(n, r);
        self.rows[n as usize][slot] = c;
        Ok(())
    }

    pub fn add_to(&mut self, n: u64, r: i64, c: Rational) -> Result<()> {
        let current = self.coeff(n, r)?;
        self.set(n, r, current + c)
    }

    /// Nonzero coefficients in `(n, r)` order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, i64, &Rational)> + '_ {
        self.rows.iter().enumerate().flat_map(move |(n, row)| {
            let radius = Self::radius(n as u64, self.index);
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(j, c)| (n as u64, j as i64 - radius, c))
        })
    }

    pub fn nonzero_count(&self) -> usize {
        self.terms().count()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|row| row.iter().all(Zero::is_zero))
    }

    pub fn truncate(&self, precision: u64) -> Self {
        let precision = precision.min(self.precision);
        Self::from_rows(
            self.weight,
            self.index,
            self.rows[..precision as usize].to_vec(),
        )
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.weight != other.weight {
            return Err(Error::WeightMismatch {
                left: self.weight,
                right: other.weight,
            });
        }
        if self.index != other.index {
            return Err(Error::IndexMismatch {
                expected: self.index,
                got: other.index,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let precision = self.precision.min(other.precision) as usize;
        let rows = self.rows[..precision]
            .iter()
            .zip(&other.rows[..precision])
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(Self::from_rows(self.weight, self.index, rows))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|c| c * q).collect())
            .collect();
        Self::from_rows(self.weight, self.index, rows)
    }

    /// Product of weights `k_a + k_b` and index `m_a + m_b`; the precision is
    /// the smaller of the two.
    pub fn multiply(&self, other: &Self) -> Self {
        product::multiply(self, other)
    }

    /// No coefficient with `4nm - r^2 < 0`.
    pub fn is_holomorphic(&self) -> bool {
        let m = self.index as i64;
        self.terms().all(|(n, r, _)| 4 * n as i64 * m - r * r >= 0)
    }

    /// Holomorphic with no coefficient at `4nm - r^2 = 0`.
    pub fn is_cusp_form(&self) -> bool {
        let m = self.index as i64;
        self.terms().all(|(n, r, _)| 4 * n as i64 * m - r * r > 0)
    }

    /// Pairs `(n, r)` breaking `c(n, r) = c(n + r + m, r + 2m)` where both
    /// sides lie below the precision.
    pub fn elementary_invariance_violations(&self) -> Vec<(u64, i64)> {
        let m = self.index as i64;
        let mut out = Vec::new();
        for n in 0..self.precision {
            let radius = Self::radius(n, self.index);
            for r in -radius..=radius {
                let shifted = n as i64 + r + m;
                if shifted < 0 || shifted as u64 >= self.precision {
                    continue;
                }
                let lhs = self.get(n, r).cloned().unwrap_or_else(Rational::zero);
                let rhs = self
                    .get(shifted as u64, r + 2 * m)
                    .cloned()
                    .unwrap_or_else(Rational::zero);
                if lhs != rhs {
                    out.push((n, r));
                }
            }
        }
        out
    }

    /// Pairs `(n, r)` breaking `c(n, -r) = (-1)^k c(n, r)`.
    pub fn r_symmetry_violations(&self) -> Vec<(u64, i64)> {
        let sign = if self.weight.rem_euclid(2) == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        self.terms()
            .filter(|(_, r, _)| *r > 0 || (*r == 0 && !sign.is_one()))
            .filter(|(n, r, c)| {
                let mirror = self.get(*n, -r).cloned().unwrap_or_else(Rational::zero);
                mirror != &sign * *c
            })
            .map(|(n, r, _)| (n, r))
            .collect()
    }

    /// `sum c(n, r) e(n tau1 + r z)` over the stored coefficients.
    ///
    /// The tail estimate assumes the omitted rows decay geometrically with
    /// ratio `|q|` starting from the size of the last stored row.
    pub fn evaluate(&self, tau1: ComplexVal, z: ComplexVal) -> Evaluation {
        let q = (ComplexVal::new(0.0, TAU) * tau1).exp();
        let zeta = (ComplexVal::new(0.0, TAU) * z).exp();
        let zeta_inv = zeta.inv();
        let mut value = ComplexVal::new(0.0, 0.0);
        let mut q_pow = ComplexVal::new(1.0, 0.0);
        let mut last_row = 0.0;
        for (n, row) in self.rows.iter().enumerate() {
            let radius = Self::radius(n as u64, self.index);
            let mut row_sum = ComplexVal::new(0.0, 0.0);
            let mut row_abs = 0.0;
            // zeta^{-radius}, then step by zeta
            let mut z_pow = zeta_inv.powi(radius as i32);
            for c in row {
                if !c.is_zero() {
                    let term = z_pow * rational_to_f64(c);
                    row_sum += term;
                    row_abs += term.norm();
                }
                z_pow *= zeta;
            }
            value += q_pow * row_sum;
            last_row = q_pow.norm() * row_abs;
            q_pow *= q;
        }
        let ratio = q.norm();
        let tail = if ratio < 1.0 {
            last_row * ratio / (1.0 - ratio)
        } else {
            f64::INFINITY
        };
        Evaluation { value, tail }
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .terms()
            .map(|(n, r, c)| json!([n, r, format_rational(c)]))
            .collect();
        json!({
            "k": self.weight,
            "m": self.index,
            "prec": self.precision,
            "coeffs": coeffs,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |name: &str| {
            v.get(name)
                .ok_or_else(|| Error::Parse(format!("Jacobi form record lacks \"{name}\"")))
        };
        let weight = field("k")?
            .as_i64()
            .ok_or_else(|| Error::Parse("\"k\" must be an integer".into()))?;
        let index = field("m")?
            .as_u64()
            .ok_or_else(|| Error::Parse("\"m\" must be a nonnegative integer".into()))?;
        let precision = field("prec")?
            .as_u64()
            .ok_or_else(|| Error::Parse("\"prec\" must be a nonnegative integer".into()))?;
        let coeffs = field("coeffs")?
            .as_array()
            .ok_or_else(|| Error::Parse("\"coeffs\" must be an array".into()))?;
        let mut out = Self::zero(weight, index, precision);
        for entry in coeffs {
            let bad = || Error::Parse(format!("bad coefficient entry {entry}"));
            let triple = entry.as_array().filter(|t| t.len() == 3).ok_or_else(bad)?;
            let n = triple[0].as_u64().ok_or_else(bad)?;
            let r = triple[1].as_i64().ok_or_else(bad)?;
            let c = parse_rational(triple[2].as_str().ok_or_else(bad)?)?;
            out.add_to(n, r, c)
                .map_err(|e| Error::Parse(format!("{entry}: {e}")))?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{eisenstein_qexp, int, rat};

    #[test]
    fn window_covers_weak_support() {
        assert_eq!(JacobiFormQExp::radius(0, 1), 1);
        assert_eq!(JacobiFormQExp::radius(2, 1), 3);
        assert_eq!(JacobiFormQExp::radius(5, 0), 0);
        let mut f = JacobiFormQExp::zero(10, 1, 3);
        assert!(f.set(0, 2, int(1)).is_err());
        assert!(f.set(3, 0, int(1)).is_err());
        f.set(2, -3, rat(1, 2)).unwrap();
        assert_eq!(f.coeff(2, -3).unwrap(), rat(1, 2));
        assert_eq!(f.coeff(2, 7).unwrap(), int(0));
        assert!(f.coeff(3, 0).is_err());
    }

    #[test]
    fn json_round_trip_and_shape() {
        let f = JacobiFormQExp::from_terms(
            10,
            1,
            3,
            [(1, 0, int(1)), (1, 1, rat(-1, 2)), (1, -1, rat(-1, 2))],
        )
        .unwrap();
        let v = f.to_json();
        assert_eq!(
            v,
            json!({"k": 10, "m": 1, "prec": 3, "coeffs": [[1, -1, "-1/2"], [1, 0, "1"], [1, 1, "-1/2"]]})
        );
        assert_eq!(JacobiFormQExp::from_json(&v).unwrap(), f);
        assert!(JacobiFormQExp::from_json(&json!({"k": 1, "m": 1, "prec": 2})).is_err());
        let outside = json!({"k": 1, "m": 1, "prec": 2, "coeffs": [[0, 5, "1/1"]]});
        assert!(JacobiFormQExp::from_json(&outside).is_err());
    }

    #[test]
    fn products_with_units_and_zero() {
        let (a, _) = weak_generators(6);
        let one = JacobiFormQExp::one(6);
        assert_eq!(one.multiply(&a), a);
        let zero = JacobiFormQExp::zero(4, 2, 6);
        let p = a.multiply(&zero);
        assert!(p.is_zero());
        assert_eq!((p.weight(), p.index()), (2, 3));
        let e4 = JacobiFormQExp::from_elliptic(4, &eisenstein_qexp(4, 6).unwrap()).unwrap();
        let b = a.multiply(&e4);
        assert_eq!((b.weight(), b.index()), (2, 1));
    }

    #[test]
    fn evaluate_constants() {
        let tau = ComplexVal::new(0.1, 1.0);
        let z = ComplexVal::new(0.3, 0.2);
        let zero = JacobiFormQExp::zero(10, 1, 5);
        assert_eq!(zero.evaluate(tau, z).value, ComplexVal::new(0.0, 0.0));
        let one = JacobiFormQExp::one(5);
        assert!((one.evaluate(tau, z).value - ComplexVal::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn add_checks_weight_and_index() {
        let a = JacobiFormQExp::zero(4, 1, 3);
        assert!(matches!(
            a.add(&JacobiFormQExp::zero(6, 1, 3)),
            Err(Error::WeightMismatch { .. })
        ));
        assert!(matches!(
            a.add(&JacobiFormQExp::zero(4, 2, 3)),
            Err(Error::IndexMismatch { .. })
        ));
        assert_eq!(a.add(&JacobiFormQExp::zero(4, 1, 2)).unwrap().precision(), 2);
    }
}
