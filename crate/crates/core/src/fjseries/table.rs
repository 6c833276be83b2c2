use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_traits::Zero;

use super::FormalFJ;
use crate::arith::{rational_to_f64, ComplexVal, Rational};
use crate::convergence::rho;
use crate::error::{Error, Result};
use crate::jacobi::JacobiFormQExp;

/// A point `[[tau1, z], [z, tau2]]` of the Siegel upper half space of
/// degree two.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SiegelPoint {
    pub tau1: ComplexVal,
    pub z: ComplexVal,
    pub tau2: ComplexVal,
}

impl SiegelPoint {
    pub fn new(tau1: ComplexVal, z: ComplexVal, tau2: ComplexVal) -> Self {
        SiegelPoint { tau1, z, tau2 }
    }
}

/// Flat table `c(n, r, m)` of a series, nonzero entries only.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CoefficientTable {
    pub weight: i64,
    pub precision: u64,
    pub m_max: u64,
    pub entries: BTreeMap<(u64, i64, u64), Rational>,
}

impl CoefficientTable {
    pub fn from_series(f: &FormalFJ) -> Self {
        let entries = f
            .phis()
            .iter()
            .flat_map(|phi| {
                let m = phi.index();
                phi.terms().map(move |(n, r, c)| ((n, r, m), c.clone()))
            })
            .collect();
        CoefficientTable {
            weight: f.weight(),
            precision: f.precision(),
            m_max: f.m_max(),
            entries,
        }
    }

    pub fn get(&self, n: u64, r: i64, m: u64) -> Rational {
        self.entries
            .get(&(n, r, m))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `sum c(n, r, m) e(n tau1 + r z + m tau2)` over every entry with
    /// `m <= m_max`.
    pub fn evaluate(&self, point: &SiegelPoint, m_max: u64) -> ComplexVal {
        let i_tau = ComplexVal::new(0.0, TAU);
        self.entries
            .iter()
            .filter(|((_, _, m), _)| *m <= m_max)
            .map(|((n, r, m), c)| {
                let phase = i_tau
                    * (point.tau1 * *n as f64 + point.z * *r as f64 + point.tau2 * *m as f64);
                phase.exp() * rational_to_f64(c)
            })
            .sum()
    }
}

/// The `q2^m` slice of a coefficient table as a Jacobi expansion of index
/// `m`.
pub fn extract_phi_m(table: &CoefficientTable, m: u64) -> Result<JacobiFormQExp> {
    let mut out = JacobiFormQExp::zero(table.weight, m, table.precision);
    for ((n, r, _), c) in table.entries.iter().filter(|((_, _, mm), _)| *mm == m) {
        out.set(*n, *r, c.clone())?;
    }
    Ok(out)
}

/// `sum_{m <= M} phi_m(tau1, z) e(m tau2)`.
pub fn evaluate_partial(f: &FormalFJ, point: &SiegelPoint, m: u64) -> Result<ComplexVal> {
    if m > f.m_max() {
        return Err(Error::OutOfPrecision {
            what: format!("partial sum to M = {m}"),
            precision: format!("M_max = {}", f.m_max()),
        });
    }
    if rho(point)? <= 0.0 {
        return Err(Error::NotInUpperHalfSpace(format!("{point:?}")));
    }
    let q2 = (ComplexVal::new(0.0, TAU) * point.tau2).exp();
    let mut q2_pow = ComplexVal::new(1.0, 0.0);
    let mut total = ComplexVal::zero();
    for phi in &f.phis()[..=m as usize] {
        if !phi.is_zero() {
            total += phi.evaluate(point.tau1, point.z).value * q2_pow;
        }
        q2_pow *= q2;
    }
    Ok(total)
}
