use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::FormalFJ;
use crate::arith::{bernoulli, sigma_table, Rational};
use crate::error::{Error, Result};
use crate::jacobi::{jacobi_space, IndexOneCoeffs, JacobiFormQExp};

/// `d_bound` a table needs to produce slices `m <= m_max` below `prec`.
fn required_bound(m_max: u64, prec: u64) -> u64 {
    4 * prec.saturating_sub(1) * m_max + 1
}

/// The slice of index `m` of the arithmetic lift of an index-one form:
/// `c(n, r, m) = sum_{d | gcd(n, r, m)} d^{k-1} c((4nm - r^2) / d^2)`.
///
/// For `m = 0` only the constant term `c(0)` contributes, through the
/// Eisenstein series `-B_k/(2k) + sum sigma_{k-1}(n) q^n`.
pub fn lift_slice(table: &IndexOneCoeffs, m: u64, prec: u64) -> Result<JacobiFormQExp> {
    let k = table.weight();
    if k < 4 || k % 2 != 0 {
        return Err(Error::UnsupportedWeight(k));
    }
    let needed = if m == 0 { 1 } else { required_bound(m, prec) };
    if table.d_bound() < needed {
        return Err(Error::OutOfPrecision {
            what: format!("lift slice {m} to q^{prec}"),
            precision: format!("D < {}", table.d_bound()),
        });
    }
    let c0 = table.get(0)?.clone();
    let mut out = JacobiFormQExp::zero(k, m, prec);
    if m == 0 {
        if c0.is_zero() || prec == 0 {
            return Ok(out);
        }
        let constant = -bernoulli(k as usize) / Rational::from_integer(BigInt::from(2 * k));
        out.set(0, 0, constant * &c0)?;
        let sigma = sigma_table((k - 1) as u32, prec as usize);
        for n in 1..prec {
            out.set(n, 0, Rational::from_integer(sigma[n as usize].clone()) * &c0)?;
        }
        return Ok(out);
    }

    let powers: Vec<Rational> = (0..=m.max(prec) as usize)
        .map(|d| Rational::from_integer(BigInt::from(d).pow((k - 1) as u32)))
        .collect();
    let rows: Vec<Vec<(i64, Rational)>> = (0..prec)
        .into_par_iter()
        .map(|n| {
            let rad = (4 * n * m).isqrt() as i64;
            (-rad..=rad)
                .filter_map(|r| {
                    let disc = 4 * n * m - (r * r) as u64;
                    let g = n.gcd(&m).gcd(&r.unsigned_abs());
                    let mut total = Rational::zero();
                    for d in 1..=g {
                        if g % d == 0 {
                            let c = table.get(disc / (d * d)).expect("bound checked");
                            if !c.is_zero() {
                                total += &powers[d as usize] * c;
                            }
                        }
                    }
                    (!total.is_zero()).then_some((r, total))
                })
                .collect()
        })
        .collect();
    for (n, row) in rows.into_iter().enumerate() {
        for (r, c) in row {
            out.set(n as u64, r, c)?;
        }
    }
    Ok(out)
}

/// The lift of a full table, slices `0..=m_max` below `prec`.
pub fn lift_from_table(table: &IndexOneCoeffs, m_max: u64, prec: u64) -> Result<FormalFJ> {
    let phis = (0..=m_max)
        .map(|m| lift_slice(table, m, prec))
        .collect::<Result<Vec<_>>>()?;
    FormalFJ::new(table.weight(), phis)
}

/// The arithmetic lift of an index-one Jacobi cusp form of even weight.
///
/// The form must be known to precision at least `(prec - 1) m_max + 1` so
/// that every discriminant `4nm - r^2` the slices need is covered.
pub fn gritsenko_lift(phi: &JacobiFormQExp, m_max: u64, prec: u64) -> Result<FormalFJ> {
    if !phi.is_cusp_form() {
        return Err(Error::NotCuspForm);
    }
    let table = IndexOneCoeffs::from_form(phi)?;
    lift_from_table(&table, m_max, prec)
}

/// The Siegel Eisenstein series of weight 4 or 6 in genus two, normalized to
/// constant term one, as the lift of the index-one Eisenstein series.
pub fn siegel_eisenstein(k: i64, m_max: u64, prec: u64) -> Result<FormalFJ> {
    if k != 4 && k != 6 {
        return Err(Error::UnsupportedWeight(k));
    }
    let jacobi_prec = prec.saturating_sub(1) * m_max.max(1) + 1;
    let e = jacobi_space(k, false, jacobi_prec.max(2))?
        .into_iter()
        .next()
        .ok_or_else(|| Error::InvalidArgument(format!("no Jacobi Eisenstein series of weight {k}")))?;
    let table = IndexOneCoeffs::from_form(&e)?;
    let normalize = -Rational::from_integer(BigInt::from(2 * k)) / bernoulli(k as usize);
    debug_assert!(table.get(0)?.is_one());
    lift_from_table(&table.scale(&normalize), m_max, prec)
}
