use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::{format_rational, lcm_u64, parse_rational, rational_to_f64, ComplexVal, Rational};
use crate::error::{Error, Result};

/// Formal combination `sum_j w_j e(j/L)` in the group ring `Q[Z/LZ]`.
///
/// No reduction modulo cyclotomic polynomials takes place, so two elements
/// with the same complex value may differ formally. Elements of different
/// orders are compared and combined after rescaling to the lcm of the orders.
#[derive(Clone, Debug)]
pub struct CycElem {
    order: u64,
    weights: BTreeMap<u64, Rational>,
}

impl CycElem {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1, "order must be positive");
        CycElem {
            order,
            weights: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::root(1, 0, Rational::one())
    }

    /// `weight * e(j/order)`; `j` is reduced modulo the order.
    pub fn root(order: u64, j: i64, weight: Rational) -> Self {
        let mut out = Self::zero(order);
        out.add_term(j, weight);
        out
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::root(1, 0, q)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn weights(&self) -> &BTreeMap<u64, Rational> {
        &self.weights
    }

    pub fn weight(&self, j: u64) -> Rational {
        self.weights
            .get(&(j % self.order))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, j: i64, weight: Rational) {
        if weight.is_zero() {
            return;
        }
        let key = j.rem_euclid(self.order as i64) as u64;
        let entry = self.weights.entry(key).or_insert_with(Rational::zero);
        *entry += weight;
        if entry.is_zero() {
            self.weights.remove(&key);
        }
    }

    /// Formally zero: every weight vanishes.
    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    /// Re-expresses the element over a multiple of its order.
    pub fn rescale(&self, order: u64) -> Self {
        assert!(
            order % self.order == 0,
            "target order {order} is not a multiple of {}",
            self.order
        );
        let factor = order / self.order;
        CycElem {
            order,
            weights: self
                .weights
                .iter()
                .map(|(j, w)| (j * factor, w.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(self.order);
        }
        CycElem {
            order: self.order,
            weights: self.weights.iter().map(|(j, w)| (*j, w * q)).collect(),
        }
    }

    /// Floating point value `sum w_j exp(2 pi i j / L)`.
    pub fn eval(&self) -> ComplexVal {
        self.weights
            .iter()
            .map(|(j, w)| {
                let angle = TAU * (*j as f64) / (self.order as f64);
                ComplexVal::from_polar(rational_to_f64(w), angle)
            })
            .sum()
    }

    /// Sum of the absolute values of the weights, an upper bound for
    /// `|eval()|`.
    pub fn l1_norm(&self) -> f64 {
        self.weights.values().map(|w| rational_to_f64(w).abs()).sum()
    }

    fn common(&self, other: &Self) -> (CycElem, CycElem) {
        let l = lcm_u64(self.order, other.order);
        (self.rescale(l), other.rescale(l))
    }

    pub fn to_json(&self) -> Value {
        let w: Vec<Value> = self
            .weights
            .iter()
            .map(|(j, q)| json!([j, format_rational(q)]))
            .collect();
        json!({ "L": self.order, "w": w })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let order = v
            .get("L")
            .and_then(Value::as_u64)
            .filter(|l| *l >= 1)
            .ok_or_else(|| Error::Parse("CycElem needs a positive integer \"L\"".into()))?;
        let mut out = Self::zero(order);
        let terms = v
            .get("w")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("CycElem needs a \"w\" array".into()))?;
        for term in terms {
            let pair = term.as_array().filter(|p| p.len() == 2);
            let (j, q) = match pair {
                Some(p) => (p[0].as_i64(), p[1].as_str()),
                None => (None, None),
            };
            match (j, q) {
                (Some(j), Some(q)) => out.add_term(j, parse_rational(q)?),
                _ => return Err(Error::Parse(format!("bad CycElem term {term}"))),
            }
        }
        Ok(out)
    }
}

impl PartialEq for CycElem {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.weights == b.weights
    }
}

impl Add for &CycElem {
    type Output = CycElem;
    fn add(self, other: &CycElem) -> CycElem {
        let (mut a, b) = self.common(other);
        for (j, w) in b.weights {
            a.add_term(j as i64, w);
        }
        a
    }
}

impl Sub for &CycElem {
    type Output = CycElem;
    fn sub(self, other: &CycElem) -> CycElem {
        self + &(-other)
    }
}

impl Neg for &CycElem {
    type Output = CycElem;
    fn neg(self) -> CycElem {
        CycElem {
            order: self.order,
            weights: self.weights.iter().map(|(j, w)| (*j, -w)).collect(),
        }
    }
}

impl Mul for &CycElem {
    type Output = CycElem;
    fn mul(self, other: &CycElem) -> CycElem {
        let (a, b) = self.common(other);
        let mut out = CycElem::zero(a.order);
        for (i, x) in &a.weights {
            for (j, y) in &b.weights {
                out.add_term((i + j) as i64, x * y);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use proptest::prelude::*;

    fn close(a: ComplexVal, b: ComplexVal, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn eval_examples() {
        assert!(close(
            CycElem::root(4, 0, int(1)).eval(),
            ComplexVal::new(1.0, 0.0),
            1e-15
        ));
        assert!(close(
            CycElem::root(4, 1, int(1)).eval(),
            ComplexVal::new(0.0, 1.0),
            1e-15
        ));
        let x = &CycElem::root(3, 1, int(1)) + &CycElem::root(3, 2, int(1));
        assert!(close(x.eval(), ComplexVal::new(-1.0, 0.0), 1e-12));
    }

    #[test]
    fn mixed_orders_rescale_to_lcm() {
        let half = CycElem::root(2, 1, int(1));
        let quarter = CycElem::root(4, 2, int(1));
        assert_eq!(half, quarter);
        let third = CycElem::root(3, 1, rat(1, 2));
        let sum = &half + &third;
        assert_eq!(sum.order(), 6);
        assert_eq!(sum.weight(3), int(1));
        assert_eq!(sum.weight(2), rat(1, 2));
        // e(1/2)^2 = 1 formally
        assert_eq!(&half * &half, CycElem::one());
    }

    #[test]
    fn json_round_trip() {
        let x = &CycElem::root(8, 3, rat(-5, 7)) + &CycElem::root(8, 0, int(2));
        let back = CycElem::from_json(&x.to_json()).unwrap();
        assert_eq!(back, x);
        assert_eq!(x.to_json()["w"][0], json!([0, "2"]));
        assert!(CycElem::from_json(&json!({"L": 0, "w": []})).is_err());
    }

    fn arb_cyc() -> impl Strategy<Value = CycElem> {
        (1u64..=64).prop_flat_map(|order| {
            prop::collection::vec((0..order as i64, -20i64..20, 1i64..6), 0..6).prop_map(
                move |terms| {
                    let mut x = CycElem::zero(order);
                    for (j, p, q) in terms {
                        x.add_term(j, rat(p, q));
                    }
                    x
                },
            )
        })
    }

    proptest! {
        #[test]
        fn ring_laws_hold_exactly(a in arb_cyc(), b in arb_cyc(), c in arb_cyc()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn eval_is_a_ring_homomorphism(a in arb_cyc(), b in arb_cyc()) {
            let prod = (&a * &b).eval();
            let sum = (&a + &b).eval();
            prop_assert!(close(prod, a.eval() * b.eval(), 1e-12 * (1.0 + a.l1_norm() * b.l1_norm())));
            prop_assert!(close(sum, a.eval() + b.eval(), 1e-12 * (1.0 + a.l1_norm() + b.l1_norm())));
        }
    }
}
