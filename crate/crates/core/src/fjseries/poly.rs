use serde_json::{json, Value};

use super::FormalFJ;
use crate::error::{Error, Result};

/// `Q = sum_{i <= d} a_i X^i` with `a_i` of weight `k0 + (d - i) k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialOverM {
    base_weight: i64,
    step_weight: i64,
    coeffs: Vec<FormalFJ>,
}

impl PolynomialOverM {
    /// `coeffs[i]` is `a_i`.
    pub fn new(base_weight: i64, step_weight: i64, coeffs: Vec<FormalFJ>) -> Result<Self> {
        let d = coeffs
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::InvalidArgument("a polynomial needs at least a_0".into()))?;
        for (i, a) in coeffs.iter().enumerate() {
            let expected = base_weight + (d - i) as i64 * step_weight;
            if a.weight() != expected {
                return Err(Error::WeightMismatch {
                    left: expected,
                    right: a.weight(),
                });
            }
        }
        Ok(PolynomialOverM {
            base_weight,
            step_weight,
            coeffs,
        })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn base_weight(&self) -> i64 {
        self.base_weight
    }

    pub fn step_weight(&self) -> i64 {
        self.step_weight
    }

    pub fn coeffs(&self) -> &[FormalFJ] {
        &self.coeffs
    }

    pub fn leading(&self) -> &FormalFJ {
        &self.coeffs[self.degree()]
    }

    /// The leading coefficient is the constant series `1`.
    pub fn is_monic(&self) -> bool {
        let lead = self.leading();
        lead.weight() == 0 && *lead == FormalFJ::one(lead.m_max(), lead.precision())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k0": self.base_weight,
            "k": self.step_weight,
            "coeffs": self.coeffs.iter().map(FormalFJ::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let int = |name: &str| {
            v.get(name)
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::Parse(format!("polynomial record needs an integer \"{name}\"")))
        };
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("polynomial record needs a \"coeffs\" array".into()))?
            .iter()
            .map(FormalFJ::from_json)
            .collect::<Result<Vec<_>>>()?;
        Self::new(int("k0")?, int("k")?, coeffs).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `Q(f)` by Horner's rule.
pub fn poly_eval(q: &PolynomialOverM, f: &FormalFJ) -> Result<FormalFJ> {
    if f.weight() != q.step_weight {
        return Err(Error::WeightMismatch {
            left: q.step_weight,
            right: f.weight(),
        });
    }
    let mut acc = q.leading().clone();
    for a in q.coeffs[..q.degree()].iter().rev() {
        acc = acc.multiply(f).add(a)?;
    }
    Ok(acc)
}

/// Replaces `Q` and `f` by `R(X) = a_d^{d-1} f_c^d Q((a_d f_c)^{-1} X)` and
/// `h = a_d f_c f`.
///
/// `R` is monic with `b_i = a_d^{d-1-i} f_c^{d-i} a_i`, of base weight zero
/// and step weight `k0 + l + k`, and `R(h) = a_d^{d-1} f_c^d Q(f)`. Since
/// `f_c` is cuspidal so is `h`.
pub fn monicize(
    q: &PolynomialOverM,
    f: &FormalFJ,
    f_c: &FormalFJ,
) -> Result<(PolynomialOverM, FormalFJ)> {
    if f.weight() != q.step_weight {
        return Err(Error::WeightMismatch {
            left: q.step_weight,
            right: f.weight(),
        });
    }
    let lead = q.leading();
    if lead.is_zero() {
        return Err(Error::ZeroLeadingCoefficient);
    }
    if f_c.is_zero() {
        return Err(Error::ZeroCuspForm);
    }
    if !f_c.is_cuspidal() {
        return Err(Error::NotCuspidal);
    }
    let d = q.degree();
    let inputs = || q.coeffs.iter().chain([f, f_c]);
    let m_max = inputs().map(FormalFJ::m_max).min().unwrap_or(0);
    let prec = inputs().map(FormalFJ::precision).min().unwrap_or(0);

    // powers[j] = a_d^j and cusp_powers[j] = f_c^j
    let power_table = |base: &FormalFJ| {
        let mut out = vec![FormalFJ::one(m_max, prec)];
        for j in 1..=d {
            let next = out[j - 1].multiply(base);
            out.push(next);
        }
        out
    };
    let lead_powers = power_table(lead);
    let cusp_powers = power_table(f_c);
    let mut coeffs: Vec<FormalFJ> = (0..d)
        .map(|i| {
            lead_powers[d - 1 - i]
                .multiply(&cusp_powers[d - i])
                .multiply(&q.coeffs[i])
        })
        .collect();
    coeffs.push(FormalFJ::one(m_max, prec));
    let step = q.base_weight + f_c.weight() + q.step_weight;
    let r = PolynomialOverM::new(0, step, coeffs)?;
    let h = lead.multiply(f_c).multiply(f);
    Ok((r, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::fjseries::{lift_from_table, siegel_eisenstein};
    use crate::jacobi::weight_ten_cusp_table;
    use crate::reduction::HalfIntIndex;

    fn lift10(m_max: u64, prec: u64) -> FormalFJ {
        lift_from_table(&weight_ten_cusp_table(4 * prec * m_max + 8), m_max, prec).unwrap()
    }

    #[test]
    fn identity_polynomial() {
        let f = lift10(3, 3);
        let q = PolynomialOverM::new(0, 10, vec![FormalFJ::zero(10, 3, 3), FormalFJ::one(3, 3)]).unwrap();
        assert!(q.is_monic());
        assert_eq!(poly_eval(&q, &f).unwrap(), f);
    }

    #[test]
    fn square_minus_itself_vanishes() {
        let f = lift10(4, 4);
        let a0 = f.multiply(&f).scalar_mul(&int(-1));
        let q = PolynomialOverM::new(
            0,
            10,
            vec![a0.clone(), FormalFJ::zero(10, 4, 4), FormalFJ::one(4, 4)],
        )
        .unwrap();
        assert!(poly_eval(&q, &f).unwrap().is_zero());
        // oracle: the product slice by direct convolution of two index-one
        // slices at m = 2
        let phi = f.phi(1).unwrap();
        let mut total = rat(0, 1);
        for (n1, r1, x) in phi.terms() {
            for (n2, r2, y) in phi.terms() {
                if n1 + n2 == 2 && r1 + r2 == 1 {
                    total += x * y;
                }
            }
        }
        assert_eq!(a0.coeff(&HalfIntIndex::integral(2, 1, 2)).unwrap(), -total);
    }

    #[test]
    fn weight_ladder_is_enforced() {
        let f = lift10(2, 2);
        assert!(matches!(
            PolynomialOverM::new(0, 10, vec![f.clone(), f.clone()]),
            Err(Error::WeightMismatch { .. })
        ));
        let q = PolynomialOverM::new(10, 4, vec![f.clone()]).unwrap();
        assert_eq!(q.degree(), 0);
        assert!(!q.is_monic());
    }

    #[test]
    fn degree_one_substitution() {
        // Q = a1 X + a0 with a1 = E4, a0 = -E4 f
        let (m, p) = (3, 3);
        let f = lift10(m, p);
        let e4 = siegel_eisenstein(4, m, p).unwrap();
        let a0 = e4.multiply(&f).scalar_mul(&int(-1));
        let q = PolynomialOverM::new(4, 10, vec![a0.clone(), e4.clone()]).unwrap();
        assert!(poly_eval(&q, &f).unwrap().is_zero());
        let (r, h) = monicize(&q, &f, &f).unwrap();
        assert!(r.is_monic());
        assert_eq!(r.coeffs()[0], f.multiply(&a0));
        assert_eq!(h, e4.multiply(&f).multiply(&f));
        assert!(h.is_cuspidal());
        assert!(poly_eval(&r, &h).unwrap().is_zero());
    }

    #[test]
    fn degree_two_monic_input() {
        let (m, p) = (3, 3);
        let f = lift10(m, p);
        let a0 = f.multiply(&f).scalar_mul(&int(-1));
        let q = PolynomialOverM::new(
            0,
            10,
            vec![a0.clone(), FormalFJ::zero(10, m, p), FormalFJ::one(m, p)],
        )
        .unwrap();
        let (r, _) = monicize(&q, &f, &f).unwrap();
        assert_eq!(r.coeffs()[0], f.multiply(&f).multiply(&a0));
        assert!(r.coeffs()[1].is_zero());
    }

    #[test]
    fn pads_a_non_cuspidal_root() {
        let (m, p) = (3, 3);
        let f_c = lift10(m, p);
        let e4 = siegel_eisenstein(4, m, p).unwrap();
        let e6 = siegel_eisenstein(6, m, p).unwrap();
        let f = f_c.add(&e4.multiply(&e6)).unwrap();
        assert!(!f.is_cuspidal());
        let a0 = e4.multiply(&f).scalar_mul(&int(-1));
        let q = PolynomialOverM::new(4, 10, vec![a0, e4]).unwrap();
        let (r, h) = monicize(&q, &f, &f_c).unwrap();
        assert!(h.is_cuspidal());
        assert!(poly_eval(&r, &h).unwrap().is_zero());
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let f = lift10(2, 2);
        let q = PolynomialOverM::new(0, 10, vec![FormalFJ::zero(10, 2, 2), FormalFJ::zero(0, 2, 2)]).unwrap();
        assert!(matches!(monicize(&q, &f, &f), Err(Error::ZeroLeadingCoefficient)));
        let q = PolynomialOverM::new(0, 10, vec![FormalFJ::zero(10, 2, 2), FormalFJ::one(2, 2)]).unwrap();
        assert!(matches!(
            monicize(&q, &f, &FormalFJ::zero(10, 2, 2)),
            Err(Error::ZeroCuspForm)
        ));
        assert!(matches!(
            monicize(&q, &f, &FormalFJ::one(2, 2)),
            Err(Error::NotCuspidal)
        ));
    }

    #[test]
    fn json_round_trip() {
        let f = lift10(2, 2);
        let q = PolynomialOverM::new(0, 10, vec![f.scalar_mul(&int(-1)), FormalFJ::one(2, 2)]).unwrap();
        assert_eq!(PolynomialOverM::from_json(&q.to_json()).unwrap(), q);
    }
}
