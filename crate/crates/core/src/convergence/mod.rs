//! Numerical certification of coefficient growth, convergence discs and the
//! local boundedness of partial sums.

mod report;

pub use report::{ConvergenceReport, Verdict, Witness};

use std::f64::consts::{PI, TAU};

use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::{int, rational_to_f64, ComplexVal, Rational};
use crate::error::{Error, Result};
use crate::fjseries::{poly_eval, CoefficientTable, FormalFJ, PolynomialOverM, SiegelPoint};
use crate::jacobi::{fe_norm, SpecializedExpansion, TorsionPoint};
use crate::reduction::{SymMatQ, DEFAULT_CAP};

/// Tunable constants for the certificates.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundConfig {
    /// The coefficient-determination constant `b` of the finite index set.
    pub b: Rational,
    /// Allowance added to fitted exponents.
    pub slack: f64,
    /// Multiplicative allowance on fitted or sampled constants.
    pub kappa: f64,
    /// Relative tolerance of Cauchy gaps.
    pub cauchy_tol: f64,
    /// Size guard for enumerations.
    pub cap: usize,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig {
            b: int(1),
            slack: 0.5,
            kappa: 1.1,
            cauchy_tol: 1e-8,
            cap: DEFAULT_CAP,
        }
    }
}

impl BoundConfig {
    pub fn validate(&self) -> Result<()> {
        if self.b <= Rational::zero() {
            return Err(Error::InvalidArgument("b must be positive".into()));
        }
        if !(self.slack >= 0.0 && self.kappa > 0.0 && self.cauchy_tol > 0.0) {
            return Err(Error::InvalidArgument(
                "slack must be nonnegative, kappa and the tolerance positive".into(),
            ));
        }
        Ok(())
    }
}

/// Sample points `(tau1, z)` and the margin `eps` defining the compact set
/// `K_eps(U)` of points with `(tau1, z)` in `U`, `rho(tau)` in
/// `[eps, 1/eps]` and `Re tau2` in `[-1/2, 1/2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompactBoxSpec {
    pub points: Vec<(ComplexVal, ComplexVal)>,
    pub eps: f64,
}

impl CompactBoxSpec {
    pub fn new(points: Vec<(ComplexVal, ComplexVal)>, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidArgument(format!("eps = {eps} is not in (0, 1)")));
        }
        if let Some((tau1, _)) = points.iter().find(|(tau1, _)| tau1.im <= 0.0) {
            return Err(Error::NotInUpperHalfSpace(format!("tau1 = {tau1}")));
        }
        Ok(CompactBoxSpec { points, eps })
    }

    /// `U` as a `per_dim x per_dim` tensor grid in `z` inside the disc
    /// `|z| <= radius`, at a single `tau1`.
    pub fn disc(tau1: ComplexVal, radius: f64, per_dim: usize, eps: f64) -> Result<Self> {
        let half = radius / 2f64.sqrt();
        let points = linspace(-half, half, per_dim)
            .flat_map(|x| linspace(-half, half, per_dim).map(move |y| (tau1, ComplexVal::new(x, y))))
            .collect();
        Self::new(points, eps)
    }

    /// Tensor grid of `K_{scale eps}(U)`: for each `(tau1, z)`, `per_dim`
    /// values of `rho` and of `Re tau2`.
    pub fn grid(&self, scale: f64, per_dim: usize) -> Vec<SiegelPoint> {
        let e = self.eps * scale;
        let mut out = Vec::new();
        for (tau1, z) in &self.points {
            let shift = z.im * z.im / tau1.im;
            for rho in linspace(e, 1.0 / e, per_dim) {
                for re in linspace(-0.5, 0.5, per_dim) {
                    out.push(SiegelPoint::new(*tau1, *z, ComplexVal::new(re, rho + shift)));
                }
            }
        }
        out
    }
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> + Clone {
    (0..n).map(move |i| {
        if n == 1 {
            (a + b) / 2.0
        } else {
            a + (b - a) * i as f64 / (n - 1) as f64
        }
    })
}

/// `C = lambda^T Im(tau1) lambda`, which equals `Im(z)^T Im(tau1)^{-1} Im(z)`
/// at the torsion point `z = tau1 lambda + mu`.
pub fn c_constant(tau1: ComplexVal, p: &TorsionPoint) -> f64 {
    p.lambda_rational()
        .iter()
        .map(|l| rational_to_f64(&(l * l)) * tau1.im)
        .sum()
}

/// [`c_constant`] in exact arithmetic for rational `Im(tau1)`.
pub fn c_constant_exact(im_tau1: &Rational, p: &TorsionPoint) -> Rational {
    p.lambda_rational().iter().map(|l| l * l * im_tau1).sum()
}

/// `Im(tau2) - Im(z)^2 / Im(tau1)`; `Im(tau)` is positive definite iff this
/// and `Im(tau1)` are positive.
pub fn rho(tau: &SiegelPoint) -> Result<f64> {
    if tau.tau1.im <= 0.0 {
        return Err(Error::NotInUpperHalfSpace(format!("Im tau1 = {}", tau.tau1.im)));
    }
    Ok(tau.tau2.im - tau.z.im * tau.z.im / tau.tau1.im)
}

/// Least-squares slope of `y` against `x`.
fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Fits `log ||eta_m||_FE` against `log m` for `etas[i]` the specialization
/// of `phi_{i+1}`, and compares the slope with `k + (g - 1)/2 + slack`.
pub fn growth_fit(
    etas: &[SpecializedExpansion],
    k: i64,
    g: usize,
    s: &[SymMatQ],
    cfg: &BoundConfig,
) -> Result<ConvergenceReport> {
    cfg.validate()?;
    if etas.len() < 8 {
        return Err(Error::InvalidArgument(format!(
            "a growth fit needs m up to at least 8, got {}",
            etas.len()
        )));
    }
    let threshold = k as f64 + (g as f64 - 1.0) / 2.0;
    let mut report = ConvergenceReport::new(
        "growth_fit",
        "||eta_m||_FE grows at most like m^(k + (g-1)/2)",
        ["m", "fe_norm"],
    );
    report.tolerance("slack", cfg.slack);
    report.constant("b", rational_to_f64(&cfg.b));
    report.constant("threshold", threshold);
    report.constant("index_set_size", s.len() as f64);

    let norms = etas
        .par_iter()
        .map(|eta| fe_norm(eta, s))
        .collect::<Result<Vec<f64>>>()?;
    let mut max_ratio = 0.0f64;
    for (i, eta) in etas.iter().enumerate() {
        let m = (i + 1) as f64;
        for x in s {
            let c = eta.coefficient(x.get(0, 0))?.eval().norm();
            max_ratio = max_ratio.max(c / m.powf(threshold));
        }
    }
    report.constant("max_coeff_ratio", max_ratio);
    report.series = norms
        .iter()
        .enumerate()
        .map(|(i, v)| ((i + 1) as f64, *v))
        .collect();

    let logs: Vec<(f64, f64)> = report
        .series
        .iter()
        .filter(|(_, v)| *v > 0.0)
        .map(|(m, v)| (m.ln(), v.ln()))
        .collect();
    if logs.len() < 2 {
        report.verdict = Verdict::Degenerate;
        report.witnesses.push(Witness::new(
            "nonzero_norms",
            logs.len() as f64,
            "too few nonzero FE-norms to fit a slope",
        ));
        return Ok(report);
    }
    let fitted = slope(&logs);
    report.exponent = Some(fitted);
    if fitted > threshold + cfg.slack {
        report.fail(Witness::new(
            "slope",
            fitted,
            format!("exceeds {} + {}", threshold, cfg.slack),
        ));
    }
    Ok(report)
}

/// `phi_m(tau1, z)` for `m = 0..=m_max` with the summed `q1` tail estimates.
fn slice_values(f: &FormalFJ, tau1: ComplexVal, z: ComplexVal, m_max: u64) -> Vec<(ComplexVal, f64)> {
    f.phis()[..=m_max as usize]
        .par_iter()
        .map(|phi| {
            if phi.is_zero() {
                (ComplexVal::zero(), 0.0)
            } else {
                let e = phi.evaluate(tau1, z);
                (e.value, e.tail)
            }
        })
        .collect()
}

/// Checks that `sum phi_m(tau1, z) q2^m` at the torsion point `z` converges
/// on the circle `|q2| = theta e^{-2 pi C}`: the gap `|S_2M - S_M|` is below
/// the tolerance and the term sizes decay over `M < m <= 2M`.
pub fn pointwise_convergence_check(
    f: &FormalFJ,
    p: &TorsionPoint,
    tau1: ComplexVal,
    theta: f64,
    m: u64,
    cfg: &BoundConfig,
) -> Result<ConvergenceReport> {
    cfg.validate()?;
    if !f.is_cuspidal() {
        return Err(Error::NotCuspidal);
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidArgument(format!("theta = {theta} is not in (0, 1)")));
    }
    if tau1.im <= 0.0 {
        return Err(Error::NotInUpperHalfSpace(format!("tau1 = {tau1}")));
    }
    if p.lambda.len() != 1 {
        return Err(Error::UnsupportedGenus(p.lambda.len() + 1));
    }
    if m == 0 || 2 * m > f.m_max() {
        return Err(Error::OutOfPrecision {
            what: format!("partial sums up to 2M = {}", 2 * m),
            precision: format!("M_max = {}", f.m_max()),
        });
    }
    let c = c_constant(tau1, p);
    let radius = (-TAU * c).exp();
    let q2_abs = theta * radius;
    let lambda = rational_to_f64(&p.lambda_rational()[0]);
    let mu = rational_to_f64(&p.mu_rational()[0]);
    let z = tau1 * lambda + mu;

    let mut report = ConvergenceReport::new(
        "pointwise_convergence",
        "sum phi_m(tau1, z) q2^m converges absolutely for |q2| < exp(-2 pi C)",
        ["M", "abs_partial_sum"],
    );
    report.constant("C", c);
    report.constant("disc_radius", radius);
    report.constant("q2_abs", q2_abs);
    report.constant("theta", theta);
    report.tolerance("cauchy_tol", cfg.cauchy_tol);

    let values = slice_values(f, tau1, z, 2 * m);
    let mut partial = ComplexVal::zero();
    let mut sums = Vec::with_capacity(values.len());
    let mut terms = Vec::with_capacity(values.len());
    let mut truncation = 0.0;
    for (j, (v, tail)) in values.iter().enumerate() {
        let scale = q2_abs.powi(j as i32);
        let term = v * scale;
        partial += term;
        truncation += tail * scale;
        sums.push(partial);
        terms.push(term.norm());
        report.series.push((j as f64, partial.norm()));
    }
    let s_m = sums[m as usize];
    let s_2m = sums[2 * m as usize];
    let gap = (s_2m - s_m).norm();
    let allowed = cfg.cauchy_tol * s_m.norm().max(1.0);
    report.constant("S_M_abs", s_m.norm());
    report.constant("cauchy_gap", gap);
    report.constant("q1_truncation", truncation);
    report.witnesses.push(Witness::new(
        "S_M",
        s_m.norm(),
        format!("S_{m} = {} {:+}i", s_m.re, s_m.im),
    ));
    if gap >= allowed {
        report.fail(Witness::new(
            "cauchy_gap",
            gap,
            format!("|S_{} - S_{m}| >= {allowed:e}", 2 * m),
        ));
    }
    if truncation >= allowed {
        report.fail(Witness::new(
            "q1_truncation",
            truncation,
            format!("estimated q1 tail >= {allowed:e}; raise the precision"),
        ));
    }
    let head = terms[(m as usize / 2).max(1)..=m as usize].iter().cloned().fold(0.0, f64::max);
    let tail = terms[m as usize + 1..].iter().cloned().fold(0.0, f64::max);
    report.constant("head_term_max", head);
    report.constant("tail_term_max", tail);
    if tail > head {
        report.fail(Witness::new(
            "term_growth",
            tail,
            format!("terms past M reach {tail:e}, above {head:e} on (M/2, M]"),
        ));
    }
    Ok(report)
}

/// Cached `phi_m(tau1, z)` per sample pair, for every series given.
fn cached_values(series: &[&FormalFJ], pairs: &[(ComplexVal, ComplexVal)]) -> Vec<Vec<Vec<ComplexVal>>> {
    pairs
        .par_iter()
        .map(|(tau1, z)| {
            series
                .iter()
                .map(|f| {
                    slice_values(f, *tau1, *z, f.m_max())
                        .into_iter()
                        .map(|(v, _)| v)
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn partial_from_values(values: &[ComplexVal], tau2: ComplexVal, m: usize) -> ComplexVal {
    let q2 = (ComplexVal::new(0.0, TAU) * tau2).exp();
    let mut q2_pow = ComplexVal::new(1.0, 0.0);
    let mut total = ComplexVal::zero();
    for v in &values[..=m.min(values.len() - 1)] {
        total += v * q2_pow;
        q2_pow *= q2;
    }
    total
}

fn distinct_pairs(grid: &[SiegelPoint]) -> Vec<(ComplexVal, ComplexVal)> {
    let mut pairs: Vec<(ComplexVal, ComplexVal)> = Vec::new();
    for p in grid {
        if !pairs.iter().any(|(t, z)| *t == p.tau1 && *z == p.z) {
            pairs.push((p.tau1, p.z));
        }
    }
    pairs
}

/// `max_grid (1 + sum_{i < d} |a_i(tau)|)` for a monic `Q`, each `a_i`
/// summed to its full `M_max`.
pub fn d_eps(q: &PolynomialOverM, grid: &[SiegelPoint]) -> Result<f64> {
    if !q.is_monic() {
        return Err(Error::NotMonic);
    }
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty sample grid".into()));
    }
    for p in grid {
        if rho(p)? <= 0.0 {
            return Err(Error::NotInUpperHalfSpace(format!("{p:?}")));
        }
    }
    let lower: Vec<&FormalFJ> = q.coeffs()[..q.degree()].iter().collect();
    let pairs = distinct_pairs(grid);
    let cache = cached_values(&lower, &pairs);
    let value = grid
        .iter()
        .map(|p| {
            let at = pairs
                .iter()
                .position(|(t, z)| *t == p.tau1 && *z == p.z)
                .expect("pair collected");
            1.0 + cache[at]
                .iter()
                .map(|vals| partial_from_values(vals, p.tau2, vals.len() - 1).norm())
                .sum::<f64>()
        })
        .fold(0.0, f64::max);
    Ok(value)
}

/// Checks `|sum_{m <= M} phi_m(tau1, z) q2^m| <= kappa D e^{-2 pi eps} /
/// (1 - e^{-2 pi eps})` on the grid of `K_{2 eps}(U)` for every `M` listed,
/// with `D = D_eps(U)` sampled on the grid of `K_eps(U)`.
///
/// Unmet hypotheses (`Q` not monic, `f` not cuspidal, `Q(f) != 0`) are
/// errors rather than failed bounds.
pub fn partial_sum_bound_check(
    f: &FormalFJ,
    q: &PolynomialOverM,
    bx: &CompactBoxSpec,
    m_list: &[u64],
    per_dim: usize,
    cfg: &BoundConfig,
) -> Result<ConvergenceReport> {
    cfg.validate()?;
    if !q.is_monic() {
        return Err(Error::NotMonic);
    }
    if !f.is_cuspidal() {
        return Err(Error::NotCuspidal);
    }
    let residual = poly_eval(q, f)?;
    if !residual.is_zero() {
        let (m, n, r) = first_nonzero(&residual).expect("nonzero series");
        return Err(Error::RelationFails(format!("c(Q(f); n={n}, r={r}, m={m}) != 0")));
    }
    if let Some(m) = m_list.iter().find(|m| **m > f.m_max()) {
        return Err(Error::OutOfPrecision {
            what: format!("partial sum to M = {m}"),
            precision: format!("M_max = {}", f.m_max()),
        });
    }
    let d = d_eps(q, &bx.grid(1.0, per_dim))?;
    let decay = (-TAU * bx.eps).exp();
    let bound = cfg.kappa * d * decay / (1.0 - decay);

    let mut report = ConvergenceReport::new(
        "partial_sum_bound",
        "|sum_{m<=M} phi_m q2^m| <= D_eps(U) e^{-2 pi eps} / (1 - e^{-2 pi eps}) on K_2eps(U)",
        ["M", "max_abs_partial_sum"],
    );
    report.constant("D_eps", d);
    report.constant("bound", bound);
    report.constant("eps", bx.eps);
    report.tolerance("kappa", cfg.kappa);

    let grid = bx.grid(2.0, per_dim);
    let pairs = distinct_pairs(&grid);
    report.constant("grid_points", grid.len() as f64);
    let cache = cached_values(&[f], &pairs);
    let mut worst = vec![0.0f64; m_list.len()];
    for p in &grid {
        let at = pairs
            .iter()
            .position(|(t, z)| *t == p.tau1 && *z == p.z)
            .expect("pair collected");
        for (i, m) in m_list.iter().enumerate() {
            let s = partial_from_values(&cache[at][0], p.tau2, *m as usize).norm();
            worst[i] = worst[i].max(s);
            if s > bound {
                report.fail(Witness::new(
                    "partial_sum",
                    s,
                    format!(
                        "M = {m} at tau1 = {}, z = {}, tau2 = {}",
                        p.tau1, p.z, p.tau2
                    ),
                ));
            }
        }
    }
    report.series = m_list.iter().zip(&worst).map(|(m, w)| (*m as f64, *w)).collect();
    let margin = worst.iter().cloned().fold(0.0, f64::max);
    report.constant("max_partial_sum", margin);
    report.constant("margin", bound - margin);
    Ok(report)
}

fn first_nonzero(f: &FormalFJ) -> Option<(u64, u64, i64)> {
    f.phis()
        .iter()
        .find_map(|phi| phi.terms().next().map(|(n, r, _)| (phi.index(), n, r)))
}

/// Fits the smallest `C_H` with `|c(f; t)| <= C_H det(t)^k` over positive
/// definite `t` with `n, m <= bound`, and compares it with the value for
/// `bound / 2`.
pub fn hecke_coeff_check(f: &FormalFJ, bound: u64, cfg: &BoundConfig) -> Result<ConvergenceReport> {
    cfg.validate()?;
    if !f.is_cuspidal() {
        return Err(Error::NotCuspidal);
    }
    let table = CoefficientTable::from_series(f);
    let fit = |limit: u64| -> (f64, Option<(u64, i64, u64)>) {
        let mut best = (0.0, None);
        for ((n, r, m), c) in &table.entries {
            if *n > limit || *m > limit {
                continue;
            }
            let four_det = 4 * (*n * *m) as i64 - r * r;
            if four_det <= 0 {
                continue;
            }
            let det = four_det as f64 / 4.0;
            let ratio = rational_to_f64(c).abs() / det.powi(f.weight() as i32);
            if ratio > best.0 {
                best = (ratio, Some((*n, *r, *m)));
            }
        }
        best
    };
    let limit = bound.min(f.m_max()).min(f.precision().saturating_sub(1));
    let (full, at) = fit(limit);
    let (half, _) = fit(limit / 2);
    let mut report = ConvergenceReport::new(
        "hecke_coefficient_bound",
        "|c(f; t)| <= C_H det(t)^k for positive definite t",
        ["bound", "C_H"],
    );
    report.constant("C_H", full);
    report.constant("C_H_half", half);
    report.constant("bound", limit as f64);
    report.tolerance("kappa", cfg.kappa);
    report.series = vec![((limit / 2) as f64, half), (limit as f64, full)];
    if let Some((n, r, m)) = at {
        report.witnesses.push(Witness::new(
            "argmax",
            full,
            format!("t = (n={n}, r={r}, m={m})"),
        ));
    }
    if full == 0.0 {
        report.verdict = Verdict::Degenerate;
    } else if full > cfg.kappa * half {
        report.fail(Witness::new(
            "C_H_growth",
            full / half,
            format!("C_H({limit}) / C_H({}) exceeds {}", limit / 2, cfg.kappa),
        ));
    }
    Ok(report)
}

/// The first `N` for which rounding `(lambda*, mu*)` to `(1/N)Z` lands
/// within `delta` of `z`, where `z = tau1 lambda* + mu*` with real
/// `lambda*`, `mu*`.
pub fn torsion_approximate(tau1: ComplexVal, z: ComplexVal, delta: f64) -> Result<TorsionPoint> {
    if tau1.im <= 0.0 {
        return Err(Error::NotInUpperHalfSpace(format!("tau1 = {tau1}")));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    let lambda = z.im / tau1.im;
    let mu = z.re - tau1.re * lambda;
    for n in 1u64.. {
        let a = (n as f64 * lambda).round();
        let b = (n as f64 * mu).round();
        let point = tau1 * (a / n as f64) + b / n as f64;
        if (point - z).norm() < delta {
            return TorsionPoint::new(n, vec![a as i64], vec![b as i64]);
        }
    }
    unreachable!("rounding error shrinks like 1/N")
}

/// `exp(-2 pi C)`, the radius of the convergence disc in `q2`.
pub fn disc_radius(tau1: ComplexVal, p: &TorsionPoint) -> f64 {
    (-2.0 * PI * c_constant(tau1, p)).exp()
}
