use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::{format_rational, lcm_u64, parse_rational, ComplexVal, CycElem, Rational};
use crate::error::{Error, Result};

/// Coefficient ring of a [`QExpansion`].
pub trait Coefficient: Clone + PartialEq + Debug + Send + Sync {
    fn zero_coeff() -> Self;
    fn is_zero_coeff(&self) -> bool;
    fn add_coeff(&self, other: &Self) -> Self;
    fn mul_coeff(&self, other: &Self) -> Self;
    fn scale_coeff(&self, q: &Rational) -> Self;
    fn to_complex(&self) -> ComplexVal;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl Coefficient for Rational {
    fn zero_coeff() -> Self {
        Zero::zero()
    }
    fn is_zero_coeff(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_coeff(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_coeff(&self, other: &Self) -> Self {
        self * other
    }
    fn scale_coeff(&self, q: &Rational) -> Self {
        self * q
    }
    fn to_complex(&self) -> ComplexVal {
        ComplexVal::new(super::rational_to_f64(self), 0.0)
    }
    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }
    fn from_json(v: &Value) -> Result<Self> {
        v.as_str()
            .ok_or_else(|| Error::Parse(format!("expected a \"p/q\" string, got {v}")))
            .and_then(parse_rational)
    }
}

impl Coefficient for CycElem {
    fn zero_coeff() -> Self {
        CycElem::zero(1)
    }
    fn is_zero_coeff(&self) -> bool {
        CycElem::is_zero(self)
    }
    fn add_coeff(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_coeff(&self, other: &Self) -> Self {
        self * other
    }
    fn scale_coeff(&self, q: &Rational) -> Self {
        CycElem::scale(self, q)
    }
    fn to_complex(&self) -> ComplexVal {
        self.eval()
    }
    fn to_json(&self) -> Value {
        CycElem::to_json(self)
    }
    fn from_json(v: &Value) -> Result<Self> {
        CycElem::from_json(v)
    }
}

/// Truncated q-series `sum_e c_e q^{e/L}` with exponents `e/L >= 0`.
///
/// Coefficients are known exactly for every exponent below `precision`;
/// nothing at or above it is stored.
#[derive(Clone, Debug, PartialEq)]
pub struct QExpansion<C: Coefficient> {
    denom: u64,
    coeffs: BTreeMap<u64, C>,
    precision: Rational,
}

impl<C: Coefficient> QExpansion<C> {
    pub fn zero(denom: u64, precision: Rational) -> Self {
        assert!(denom >= 1, "exponent denominator must be positive");
        QExpansion {
            denom,
            coeffs: BTreeMap::new(),
            precision,
        }
    }

    /// Builds from `(exponent numerator, coefficient)` pairs, summing repeated
    /// exponents and dropping everything at or above the precision.
    pub fn from_terms(
        denom: u64,
        precision: Rational,
        terms: impl IntoIterator<Item = (u64, C)>,
    ) -> Self {
        let mut out = Self::zero(denom, precision);
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn from_integer_exponents(coeffs: &[C], precision: u64) -> Self {
        Self::from_terms(
            1,
            Rational::from_integer(BigInt::from(precision)),
            coeffs.iter().cloned().enumerate().map(|(e, c)| (e as u64, c)),
        )
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn precision(&self) -> &Rational {
        &self.precision
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &C)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn exponent(&self, numerator: u64) -> Rational {
        Rational::new(BigInt::from(numerator), BigInt::from(self.denom))
    }

    fn below_precision(&self, numerator: u64) -> bool {
        self.exponent(numerator) < self.precision
    }

    pub fn add_term(&mut self, numerator: u64, c: C) {
        if c.is_zero_coeff() || !self.below_precision(numerator) {
            return;
        }
        match self.coeffs.get_mut(&numerator) {
            Some(existing) => {
                let sum = existing.add_coeff(&c);
                if sum.is_zero_coeff() {
                    self.coeffs.remove(&numerator);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.coeffs.insert(numerator, c);
            }
        }
    }

    /// Coefficient at exponent `numerator / denom`, without a precision check.
    pub fn coefficient_at(&self, numerator: u64) -> C {
        self.coeffs.get(&numerator).cloned().unwrap_or_else(C::zero_coeff)
    }

    /// Coefficient at an arbitrary rational exponent; exponents off the
    /// `(1/L)Z` lattice have coefficient zero.
    pub fn coefficient(&self, exponent: &Rational) -> Result<C> {
        if exponent >= &self.precision {
            return Err(Error::OutOfPrecision {
                what: format!("q^{exponent}"),
                precision: self.precision.to_string(),
            });
        }
        let scaled = exponent * Rational::from_integer(BigInt::from(self.denom));
        if !scaled.is_integer() || scaled < Rational::zero() {
            return Ok(C::zero_coeff());
        }
        let e: u64 = scaled
            .to_integer()
            .try_into()
            .map_err(|_| Error::InvalidArgument(format!("exponent {exponent} too large")))?;
        Ok(self.coefficient_at(e))
    }

    /// The same series with exponent denominator `denom`, a multiple of the
    /// current one.
    pub fn rescale(&self, denom: u64) -> Self {
        assert!(denom % self.denom == 0, "incompatible exponent denominators");
        let f = denom / self.denom;
        QExpansion {
            denom,
            coeffs: self.coeffs.iter().map(|(e, c)| (e * f, c.clone())).collect(),
            precision: self.precision.clone(),
        }
    }

    pub fn truncate(&self, precision: &Rational) -> Self {
        let precision = precision.min(&self.precision).clone();
        Self::from_terms(
            self.denom,
            precision,
            self.coeffs.iter().map(|(e, c)| (*e, c.clone())),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let l = lcm_u64(self.denom, other.denom);
        let (a, b) = (self.rescale(l), other.rescale(l));
        let precision = a.precision.clone().min(b.precision.clone());
        let mut out = a.truncate(&precision);
        for (e, c) in b.coeffs {
            out.add_term(e, c);
        }
        out
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::from_terms(
            self.denom,
            self.precision.clone(),
            self.coeffs.iter().map(|(e, c)| (*e, c.scale_coeff(q))),
        )
    }

    /// Product; the precision is the minimum of the operand precisions.
    pub fn mul(&self, other: &Self) -> Self {
        let l = lcm_u64(self.denom, other.denom);
        let (a, b) = (self.rescale(l), other.rescale(l));
        let precision = a.precision.clone().min(b.precision.clone());
        let mut out = Self::zero(l, precision);
        for (i, x) in &a.coeffs {
            if !out.below_precision(*i) {
                break;
            }
            for (j, y) in &b.coeffs {
                if !out.below_precision(i + j) {
                    break;
                }
                out.add_term(i + j, x.mul_coeff(y));
            }
        }
        out
    }

    /// Evaluates the stored terms at `tau` (imaginary part > 0).
    pub fn evaluate(&self, tau: ComplexVal) -> ComplexVal {
        let i_tau = ComplexVal::new(0.0, TAU) * tau;
        self.coeffs
            .iter()
            .map(|(e, c)| c.to_complex() * (i_tau * (*e as f64 / self.denom as f64)).exp())
            .sum()
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .coeffs
            .iter()
            .map(|(e, c)| json!([e, c.to_json()]))
            .collect();
        json!({
            "L": self.denom,
            "prec": format_rational(&self.precision),
            "coeffs": coeffs,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let denom = v
            .get("L")
            .and_then(Value::as_u64)
            .filter(|l| *l >= 1)
            .ok_or_else(|| Error::Parse("q-expansion needs a positive integer \"L\"".into()))?;
        let precision = v
            .get("prec")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("q-expansion needs a \"prec\" string".into()))
            .and_then(parse_rational)?;
        let mut out = Self::zero(denom, precision);
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("q-expansion needs a \"coeffs\" array".into()))?;
        for entry in coeffs {
            let pair = entry
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::Parse(format!("bad coefficient entry {entry}")))?;
            let e = pair[0]
                .as_u64()
                .ok_or_else(|| Error::Parse(format!("bad exponent in {entry}")))?;
            if !out.below_precision(e) {
                return Err(Error::Parse(format!(
                    "exponent {e}/{denom} is not below the precision"
                )));
            }
            out.add_term(e, C::from_json(&pair[1])?);
        }
        Ok(out)
    }
}

impl QExpansion<Rational> {
    pub fn one(precision: Rational) -> Self {
        Self::from_terms(1, precision, [(0, Rational::one())])
    }
}
