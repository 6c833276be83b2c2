//! Exact arithmetic and classical q-expansions.

mod cyc;
mod qexp;

pub use cyc::CycElem;
pub use qexp::{Coefficient, QExpansion};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always in lowest terms with positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Floating point complex value used for numerical evaluation.
pub type ComplexVal = num_complex::Complex64;

/// Floating point value of a group-ring element.
pub fn cyc_eval(x: &CycElem) -> ComplexVal {
    x.eval()
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// `p/q`, or just `p` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator or denominator overflows f64 individually
        let (n, d) = (q.numer(), q.denom());
        let shift = n.bits().max(d.bits()).saturating_sub(900);
        let n = (n >> shift).to_f64().unwrap_or(f64::INFINITY);
        let d = (d >> shift).to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

pub fn bigint_to_f64(n: &BigInt) -> f64 {
    n.to_f64().unwrap_or(if n.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
pub fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut table: Vec<Rational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            table.push(Rational::one());
            continue;
        }
        if m > 1 && m % 2 == 1 {
            table.push(Rational::zero());
            continue;
        }
        // sum_{j<=m} binom(m+1, j) B_j = 0
        let mut binom = BigInt::one();
        let mut acc = Rational::zero();
        for (j, b) in table.iter().enumerate() {
            acc += b * Rational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        table.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    table
}

pub fn bernoulli(n: usize) -> Rational {
    bernoulli_table(n).pop().expect("table is non-empty")
}

/// Divisor power sum `sigma_k(n)`.
pub fn sigma(k: u32, n: u64) -> BigInt {
    assert!(n >= 1, "sigma is defined for n >= 1");
    let mut total = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            total += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                total += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    total
}

/// `sigma_k(n)` for all `1 <= n < len` by sieving; entry 0 is zero.
pub fn sigma_table(k: u32, len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for d in 1..len {
        let p = BigInt::from(d).pow(k);
        for m in (d..len).step_by(d) {
            out[m] += &p;
        }
    }
    out
}

/// Elliptic Eisenstein series `E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n`
/// truncated at `q^prec`.
pub fn eisenstein_qexp(k: i64, prec: u64) -> Result<QExpansion<Rational>> {
    if k != 4 && k != 6 {
        return Err(Error::UnsupportedWeight(k));
    }
    if prec == 0 {
        return Err(Error::InvalidArgument("prec must be >= 1".into()));
    }
    Ok(QExpansion::from_integer_exponents(
        &eisenstein_coefficients(k as usize, prec as usize),
        prec,
    ))
}

/// Coefficients of the normalized Eisenstein series of even weight `k >= 4`.
pub(crate) fn eisenstein_coefficients(k: usize, len: usize) -> Vec<Rational> {
    let factor = -Rational::from_integer(BigInt::from(2 * k)) / bernoulli(k);
    let sig = sigma_table(k as u32 - 1, len);
    (0..len)
        .map(|n| {
            if n == 0 {
                Rational::one()
            } else {
                &factor * Rational::from_integer(sig[n].clone())
            }
        })
        .collect()
}

pub(crate) fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: B_n from the Akiyama-Tanigawa algorithm, which
    /// yields B_1 = +1/2, so the sign of index one is adjusted.
    fn akiyama_tanigawa(n: usize) -> Rational {
        let mut a: Vec<Rational> = Vec::new();
        for m in 0..=n {
            a.push(Rational::new(BigInt::one(), BigInt::from(m + 1)));
            for j in (1..=m).rev() {
                a[j - 1] = Rational::from_integer(BigInt::from(j)) * (&a[j - 1] - &a[j]);
            }
        }
        if n == 1 {
            -a[0].clone()
        } else {
            a[0].clone()
        }
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(3), int(0));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(6), rat(1, 42));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        for n in 0..30 {
            assert_eq!(bernoulli(n), akiyama_tanigawa(n), "n = {n}");
        }
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(3, 1), BigInt::from(1));
        assert_eq!(sigma(3, 2), BigInt::from(9));
        assert_eq!(sigma(1, 6), BigInt::from(12));
        assert_eq!(sigma(0, 36), BigInt::from(9));
        let table = sigma_table(5, 50);
        for (n, value) in table.iter().enumerate().skip(1) {
            assert_eq!(value, &sigma(5, n as u64));
        }
    }

    #[test]
    fn eisenstein_leading_terms() {
        let e4 = eisenstein_qexp(4, 2).unwrap();
        assert_eq!(e4.coefficient_at(0), int(1));
        assert_eq!(e4.coefficient_at(1), int(240));
        let e6 = eisenstein_qexp(6, 1).unwrap();
        assert_eq!(e6.coefficient_at(0), int(1));
        assert_eq!(e6.len(), 1);
        let e6 = eisenstein_qexp(6, 2).unwrap();
        assert_eq!(e6.coefficient_at(1), int(-504));
        assert!(matches!(
            eisenstein_qexp(8, 3),
            Err(Error::UnsupportedWeight(8))
        ));
    }

    #[test]
    fn e4_squared_is_e8() {
        // E_8 = E_4^2 is the only relation available at weight 8
        let e4 = eisenstein_qexp(4, 12).unwrap();
        let e8 = QExpansion::from_integer_exponents(&eisenstein_coefficients(8, 12), 12);
        assert_eq!(e4.mul(&e4), e8);
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["3/4", "-7/2", "5", "0"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("6").unwrap(), int(6));
        assert_eq!(parse_rational("4/6").unwrap(), rat(2, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
