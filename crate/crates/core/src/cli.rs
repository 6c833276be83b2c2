//! The `fjcert` batch front-end.
//!
//! Every subcommand writes its report before exiting, whatever the verdict.
//! Values are resolved as flag, then config file, then built-in default.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::arith::{format_rational, parse_rational, ComplexVal, Rational};
use crate::convergence::{
    growth_fit, partial_sum_bound_check, pointwise_convergence_check, BoundConfig, CompactBoxSpec,
    ConvergenceReport,
};
use crate::error::Error;
use crate::fjseries::{gritsenko_lift, lift_from_table, FormalFJ, PolynomialOverM};
use crate::jacobi::{jacobi_space, specialize_torsion, weight_ten_cusp_table, TorsionPoint};
use crate::reduction::{enumerate_s, minkowski_reduce, SymMatQ};

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const EMPTY_CUSP_SPACE: i32 = 2;
    pub const PARSE: i32 = 3;
    pub const NOT_CUSPIDAL: i32 = 4;
    pub const HYPOTHESIS: i32 = 5;
    pub const NOT_POSITIVE_DEFINITE: i32 = 6;
    pub const USAGE: i32 = 64;
}

const THREADS_ENV: &str = "FJ_THREADS";

#[derive(Debug, Parser)]
#[command(name = "fjcert", version, about = "Formal Fourier-Jacobi series: lifts, audits and convergence certificates")]
pub struct Cli {
    /// Worker threads; overrides FJ_THREADS and the config file.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// key=value file overriding built-in defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Machine-readable output on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lift the first cusp form of index one and the given weight.
    GenLift(GenLiftArgs),
    /// Audit c(f; t[u]) = det(u)^k c(f; t) on the stored coefficients.
    CheckSymmetry(CheckSymmetryArgs),
    /// Growth fit and pointwise convergence at a torsion point.
    Certify(CertifyArgs),
    /// Local boundedness of the partial sums of a root of a monic polynomial.
    BoundReport(BoundReportArgs),
    /// Minkowski-reduce a positive definite form.
    Reduce(ReduceArgs),
}

#[derive(Debug, Args)]
pub struct GenLiftArgs {
    /// Even weight k.
    #[arg(long)]
    pub weight: i64,
    /// q1 precision of every slice [default: 20].
    #[arg(long)]
    pub prec: Option<u64>,
    /// Largest slice index [default: 40].
    #[arg(long)]
    pub mmax: Option<u64>,
    /// Series file to write.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CheckSymmetryArgs {
    /// Series file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Audit t with n, m <= bound [default: 10].
    #[arg(long)]
    pub bound: Option<u64>,
    /// JSON report, written even on failure.
    #[arg(long)]
    pub report: PathBuf,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// Series file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// `N,a,b` for lambda = a/N, mu = b/N [default: 2,1,0].
    #[arg(long)]
    pub torsion: Option<String>,
    /// `x+yi` [default: i].
    #[arg(long)]
    pub tau1: Option<String>,
    /// |q2| as a fraction of the disc radius, in (0, 1) [default: 0.25].
    #[arg(long)]
    pub theta: Option<f64>,
    /// Cauchy index: compares S_M with S_2M. Defaults to M_max / 2.
    #[arg(long = "M")]
    pub m: Option<u64>,
    /// Coefficient-determination constant, a positive rational [default: 1].
    #[arg(long)]
    pub b: Option<String>,
    /// JSON report, written even on failure.
    #[arg(long)]
    pub report: PathBuf,
}

#[derive(Debug, Args)]
pub struct BoundReportArgs {
    /// Series file of the root f.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Monic polynomial file with Q(f) = 0.
    #[arg(long)]
    pub poly: PathBuf,
    /// Box shrink parameter in (0, 1) [default: from the box file, else 0.1].
    #[arg(long)]
    pub eps: Option<f64>,
    /// Box file: sample points (tau1, z) and optional eps.
    #[arg(long = "box")]
    pub box_file: PathBuf,
    /// Grid points per real dimension [default: 5].
    #[arg(long)]
    pub grid: Option<usize>,
    /// JSON report, written even on failure.
    #[arg(long)]
    pub report: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    /// `a,b;b,c` with rational entries `p/q`.
    #[arg(long)]
    pub matrix: String,
}

/// A failed run: exit code plus message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    fn parse(e: impl std::fmt::Display) -> Self {
        Failure::new(exit::PARSE, e.to_string())
    }

    fn usage(e: impl std::fmt::Display) -> Self {
        Failure::new(exit::USAGE, e.to_string())
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Settings from the config file, as raw strings.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile(BTreeMap<String, String>);

const CONFIG_KEYS: [&str; 15] = [
    "threads", "prec", "mmax", "bound", "torsion", "tau1", "theta", "M", "b", "eps", "grid",
    "slack", "kappa", "cauchy_tol", "cap",
];

impl ConfigFile {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut out = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
            let key = key.trim();
            if !CONFIG_KEYS.contains(&key) {
                return Err(format!("line {}: unknown key {key:?}", i + 1));
            }
            out.insert(key.to_string(), value.trim().to_string());
        }
        Ok(ConfigFile(out))
    }

    fn get<T: FromStr>(&self, key: &str) -> std::result::Result<Option<T>, Failure>
    where
        T::Err: std::fmt::Display,
    {
        self.0
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| Failure::parse(format!("config {key} = {v:?}: {e}")))
            })
            .transpose()
    }

    fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> std::result::Result<T, Failure>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.get(key)?.unwrap_or(default)),
        }
    }
}

/// Parameters a run resolves to, echoed in every report.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub threads: Option<usize>,
    pub bound: BoundConfig,
    pub grid: usize,
}

impl RunConfig {
    fn resolve(cli_threads: Option<usize>, b: Option<&str>, grid: Option<usize>, cfg: &ConfigFile) -> std::result::Result<Self, Failure> {
        let env_threads = match std::env::var(THREADS_ENV) {
            Ok(v) => Some(
                v.parse::<usize>()
                    .map_err(|e| Failure::usage(format!("{THREADS_ENV}={v:?}: {e}")))?,
            ),
            Err(_) => None,
        };
        let threads = cli_threads.or(env_threads).or(cfg.get("threads")?);
        let defaults = BoundConfig::default();
        let b = match b {
            Some(text) => parse_rational(text).map_err(Failure::usage)?,
            None => match cfg.0.get("b") {
                Some(text) => parse_rational(text).map_err(Failure::parse)?,
                None => defaults.b.clone(),
            },
        };
        let bound = BoundConfig {
            b,
            slack: cfg.pick(None, "slack", defaults.slack)?,
            kappa: cfg.pick(None, "kappa", defaults.kappa)?,
            cauchy_tol: cfg.pick(None, "cauchy_tol", defaults.cauchy_tol)?,
            cap: cfg.pick(None, "cap", defaults.cap)?,
        };
        bound.validate().map_err(Failure::usage)?;
        let grid = cfg.pick(grid, "grid", 5)?;
        if grid == 0 {
            return Err(Failure::usage("grid needs at least one point per dimension"));
        }
        Ok(RunConfig { threads, bound, grid })
    }

    fn to_json(&self) -> Value {
        json!({
            "threads": self.threads,
            "b": format_rational(&self.bound.b),
            "slack": self.bound.slack,
            "kappa": self.bound.kappa,
            "cauchy_tol": self.bound.cauchy_tol,
            "cap": self.bound.cap,
            "grid": self.grid,
        })
    }
}

/// Parses `x+yi`, `x-yi`, `yi`, `i` or a real `x`.
pub fn parse_complex(text: &str) -> std::result::Result<ComplexVal, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot read {text:?} as a complex number x+yi");
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|x| ComplexVal::new(x, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent or the start
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        s => s,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    let im = im.parse::<f64>().map_err(|_| bad())?;
    Ok(ComplexVal::new(re, im))
}

/// Parses `N,a,b` into the torsion point `(a/N, b/N)`.
pub fn parse_torsion(text: &str) -> std::result::Result<TorsionPoint, String> {
    let parts: Vec<i64> = text
        .split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|e| format!("{text:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    let [n, a, b] = parts[..] else {
        return Err(format!("{text:?}: expected N,a,b"));
    };
    if n < 1 {
        return Err(format!("{text:?}: N must be positive"));
    }
    TorsionPoint::new(n as u64, vec![a], vec![b]).map_err(|e| e.to_string())
}

fn read_json(path: &Path) -> std::result::Result<Value, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

fn read_series(path: &Path) -> std::result::Result<FormalFJ, Failure> {
    FormalFJ::from_json(&read_json(path)?).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::new(exit::FAIL, format!("{}: {e}", path.display())))
}

fn write_json(path: &Path, value: &Value) -> std::result::Result<(), Failure> {
    write_text(path, &serde_json::to_string_pretty(value).expect("json value serializes"))
}

/// `path` with `suffix` appended to its file name.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.file_name().map(OsString::from).unwrap_or_default();
    name.push(suffix);
    path.with_file_name(name)
}

fn verdict_code(passed: bool) -> i32 {
    if passed {
        exit::PASS
    } else {
        exit::FAIL
    }
}

/// The lift of the first cusp form of weight `k` and index one.
pub fn lift_first_cusp_form(k: i64, m_max: u64, prec: u64) -> crate::Result<Option<FormalFJ>> {
    if k % 2 != 0 {
        return Err(Error::UnsupportedWeight(k));
    }
    // probe the dimension cheaply; low precision may not separate the
    // generators, so double until it does
    let mut probe = 4;
    let empty = loop {
        match jacobi_space(k, true, probe) {
            Ok(basis) => break basis.is_empty(),
            Err(Error::InvalidArgument(_)) if probe < 256 => probe *= 2,
            Err(e) => return Err(e),
        }
    };
    if empty {
        return Ok(None);
    }
    let table_prec = prec.saturating_sub(1) * m_max.max(1) + 1;
    if k == 10 {
        let table = weight_ten_cusp_table(4 * table_prec - 1);
        return lift_from_table(&table, m_max, prec).map(Some);
    }
    let phi = jacobi_space(k, true, table_prec)?.remove(0);
    gritsenko_lift(&phi, m_max, prec).map(Some)
}

fn gen_lift(args: &GenLiftArgs, cfg: &ConfigFile, json_out: bool) -> CmdResult {
    let prec = cfg.pick(args.prec, "prec", 20)?;
    let m_max = cfg.pick(args.mmax, "mmax", 40)?;
    if args.weight % 2 != 0 || args.weight < 4 {
        return Err(Failure::usage(format!("weight {} must be even and at least 4", args.weight)));
    }
    let lift = lift_first_cusp_form(args.weight, m_max, prec).map_err(|e| Failure::new(exit::FAIL, e.to_string()))?;
    let Some(f) = lift else {
        return Err(Failure::new(
            exit::EMPTY_CUSP_SPACE,
            format!("no cusp forms of weight {} and index one", args.weight),
        ));
    };
    write_json(&args.out, &f.to_json())?;
    let summary = json!({
        "out": args.out.display().to_string(),
        "weight": f.weight(),
        "M_max": f.m_max(),
        "prec": f.precision(),
        "cuspidal": f.is_cuspidal(),
    });
    if json_out {
        println!("{summary}");
    } else {
        println!(
            "wrote the weight {} lift to {} (M_max {}, q1 precision {})",
            f.weight(),
            args.out.display(),
            f.m_max(),
            f.precision()
        );
    }
    Ok(exit::PASS)
}

fn check_symmetry(args: &CheckSymmetryArgs, cfg: &ConfigFile, json_out: bool) -> CmdResult {
    let bound = cfg.pick(args.bound, "bound", 10)?;
    let f = match read_series(&args.input) {
        Ok(f) => f,
        Err(failure) => {
            write_json(&args.report, &json!({ "verdict": "error", "error": failure.message }))?;
            return Err(failure);
        }
    };
    let report = f.check_symmetry(bound);
    let mut out = report.to_json();
    out["bound"] = json!(bound);
    out["verdict"] = json!(if report.passed() { "pass" } else { "fail" });
    write_json(&args.report, &out)?;
    if json_out {
        println!("{out}");
    } else {
        println!(
            "symmetry: {} checked, {} skipped, {} violations",
            report.checked,
            report.skipped,
            report.violations.len()
        );
        for v in report.violations.iter().take(10) {
            println!(
                "  t = (n={}, r={}, m={}) u = {}: {} vs {}",
                v.t.0,
                v.t.1,
                v.t.2,
                v.u,
                format_rational(&v.lhs),
                format_rational(&v.rhs)
            );
        }
    }
    Ok(verdict_code(report.passed()))
}

fn error_report(path: &Path, config: &Value, failure: Failure) -> CmdResult {
    write_json(
        path,
        &json!({ "verdict": "error", "error": failure.message, "config": config }),
    )?;
    Err(failure)
}

fn certify(args: &CertifyArgs, run: &RunConfig, cfg: &ConfigFile, json_out: bool) -> CmdResult {
    let torsion_text = cfg.pick(args.torsion.clone(), "torsion", "2,1,0".to_string())?;
    let point = parse_torsion(&torsion_text).map_err(Failure::usage)?;
    let tau1_text = cfg.pick(args.tau1.clone(), "tau1", "i".to_string())?;
    let tau1 = parse_complex(&tau1_text).map_err(Failure::usage)?;
    let theta = cfg.pick(args.theta, "theta", 0.25)?;
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Failure::usage(format!("theta = {theta} is not in (0, 1)")));
    }
    if tau1.im <= 0.0 {
        return Err(Failure::usage(format!("tau1 = {tau1_text} is not in the upper half plane")));
    }
    let mut config = run.to_json();
    config["torsion"] = json!(torsion_text);
    config["tau1"] = json!([tau1.re, tau1.im]);
    config["theta"] = json!(theta);

    let f = match read_series(&args.input) {
        Ok(f) => f,
        Err(failure) => return error_report(&args.report, &config, failure),
    };
    let m = cfg.pick(args.m, "M", f.m_max() / 2)?;
    config["M"] = json!(m);
    if !f.is_cuspidal() {
        return error_report(
            &args.report,
            &config,
            Failure::new(exit::NOT_CUSPIDAL, "input series is not cuspidal"),
        );
    }

    let growth = match certify_growth(&f, &point, &run.bound) {
        Ok(g) => g,
        Err(e) => return error_report(&args.report, &config, Failure::new(exit::FAIL, e.to_string())),
    };
    let pointwise = match pointwise_convergence_check(&f, &point, tau1, theta, m, &run.bound) {
        Ok(r) => r,
        Err(e) => {
            let code = match e {
                Error::OutOfPrecision { .. } | Error::InvalidArgument(_) => exit::USAGE,
                _ => exit::FAIL,
            };
            return error_report(&args.report, &config, Failure::new(code, e.to_string()));
        }
    };
    let passed = growth.as_ref().is_none_or(ConvergenceReport::passed) && pointwise.passed();
    let out = json!({
        "verdict": if passed { "pass" } else { "fail" },
        "config": config,
        "growth": growth.as_ref().map(ConvergenceReport::to_json),
        "pointwise": pointwise.to_json(),
    });
    write_json(&args.report, &out)?;
    if let Some(g) = &growth {
        write_text(&sibling(&args.report, ".growth.csv"), &g.to_csv())?;
    }
    write_text(&sibling(&args.report, ".partial_sums.csv"), &pointwise.to_csv())?;
    if json_out {
        println!("{out}");
    } else {
        match &growth {
            Some(g) => println!(
                "growth: {:?}, exponent {}",
                g.verdict,
                g.exponent.map_or("n/a".to_string(), |e| format!("{e:.4}"))
            ),
            None => println!("growth: not run (needs M_max >= 8)"),
        }
        println!(
            "pointwise: {:?}, C = {}, disc radius {:.6e}, |S_2M - S_M| = {:.3e}",
            pointwise.verdict,
            pointwise.constants["C"],
            pointwise.constants["disc_radius"],
            pointwise.constants["cauchy_gap"]
        );
        for w in pointwise.witnesses.iter().filter(|w| w.label != "S_M") {
            println!("  witness {}: {:.3e} ({})", w.label, w.value, w.detail);
        }
    }
    Ok(verdict_code(passed))
}

/// Growth fit over every slice, with `S` cut to the exponents all the
/// specializations determine. `None` if there are fewer than eight slices.
fn certify_growth(f: &FormalFJ, point: &TorsionPoint, cfg: &BoundConfig) -> crate::Result<Option<ConvergenceReport>> {
    if f.m_max() < 8 {
        return Ok(None);
    }
    let etas = (1..=f.m_max())
        .map(|m| specialize_torsion(f.phi(m)?, point))
        .collect::<crate::Result<Vec<_>>>()?;
    let known: Rational = etas
        .iter()
        .map(|e| e.precision().clone())
        .min()
        .expect("at least eight slices");
    let full = enumerate_s(point.n, &cfg.b, 2, cfg.cap)?;
    let s: Vec<SymMatQ> = full.iter().filter(|x| *x.get(0, 0) < known).cloned().collect();
    let mut report = growth_fit(&etas, f.weight(), 2, &s, cfg)?;
    report.constant("index_set_full_size", full.len() as f64);
    report.constant("known_exponent_bound", crate::arith::rational_to_f64(&known));
    Ok(Some(report))
}

/// Reads `{"points": [[re tau1, im tau1, re z, im z], ...]}`, with an
/// optional `"eps"`.
fn read_box(path: &Path) -> std::result::Result<(Vec<(ComplexVal, ComplexVal)>, Option<f64>), Failure> {
    let v = read_json(path)?;
    let bad = |what: &str| Failure::parse(format!("{}: {what}", path.display()));
    let points = v
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("needs a \"points\" array"))?
        .iter()
        .map(|p| {
            let xs: Vec<f64> = p
                .as_array()
                .ok_or_else(|| bad("each point is an array"))?
                .iter()
                .map(|x| x.as_f64().ok_or_else(|| bad("coordinates are numbers")))
                .collect::<std::result::Result<_, _>>()?;
            let [a, b, c, d] = xs[..] else {
                return Err(bad("each point is [re tau1, im tau1, re z, im z]"));
            };
            Ok((ComplexVal::new(a, b), ComplexVal::new(c, d)))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok((points, v.get("eps").and_then(Value::as_f64)))
}

fn bound_report(args: &BoundReportArgs, run: &RunConfig, cfg: &ConfigFile, json_out: bool) -> CmdResult {
    let (points, box_eps) = read_box(&args.box_file)?;
    let eps = match args.eps {
        Some(e) => e,
        None => match cfg.get::<f64>("eps")? {
            Some(e) => e,
            None => box_eps.unwrap_or(0.1),
        },
    };
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Failure::usage(format!("eps = {eps} is not in (0, 1)")));
    }
    let mut config = run.to_json();
    config["eps"] = json!(eps);
    let bx = CompactBoxSpec::new(points, eps).map_err(Failure::usage)?;
    if bx.points.is_empty() {
        return Err(Failure::usage("the box has no sample points"));
    }
    let f = match read_series(&args.input) {
        Ok(f) => f,
        Err(failure) => return error_report(&args.report, &config, failure),
    };
    let q = match read_json(&args.poly).and_then(|v| {
        PolynomialOverM::from_json(&v).map_err(|e| Failure::parse(format!("{}: {e}", args.poly.display())))
    }) {
        Ok(q) => q,
        Err(failure) => return error_report(&args.report, &config, failure),
    };
    let m_list: Vec<u64> = (1..=f.m_max()).collect();
    let report = match partial_sum_bound_check(&f, &q, &bx, &m_list, run.grid, &run.bound) {
        Ok(r) => r,
        Err(e) => {
            let (code, which) = match &e {
                Error::NotMonic => (exit::HYPOTHESIS, "Q is monic"),
                Error::NotCuspidal => (exit::HYPOTHESIS, "f is cuspidal"),
                Error::RelationFails(_) => (exit::HYPOTHESIS, "Q(f) = 0"),
                Error::WeightMismatch { .. } => (exit::HYPOTHESIS, "weight of f matches Q"),
                _ => (exit::FAIL, "evaluation"),
            };
            return error_report(
                &args.report,
                &config,
                Failure::new(code, format!("hypothesis \"{which}\" failed: {e}")),
            );
        }
    };
    let out = json!({
        "verdict": if report.passed() { "pass" } else { "fail" },
        "config": config,
        "bound": report.to_json(),
    });
    write_json(&args.report, &out)?;
    write_text(&sibling(&args.report, ".partial_sums.csv"), &report.to_csv())?;
    if json_out {
        println!("{out}");
    } else {
        println!(
            "bound: {:?}, D_eps = {:.6e}, tail bound {:.6e}, largest partial sum {:.6e} over {} points",
            report.verdict,
            report.constants["D_eps"],
            report.constants["bound"],
            report.constants["max_partial_sum"],
            report.constants["grid_points"]
        );
        for w in report.witnesses.iter().take(10) {
            println!("  witness {}: {:.6e} ({})", w.label, w.value, w.detail);
        }
    }
    Ok(verdict_code(report.passed()))
}

fn reduce(args: &ReduceArgs, json_out: bool) -> CmdResult {
    let x = SymMatQ::parse(&args.matrix).map_err(Failure::parse)?;
    let (reduced, u) = match minkowski_reduce(&x) {
        Ok(r) => r,
        Err(Error::NotPositiveDefinite) => {
            return Err(Failure::new(
                exit::NOT_POSITIVE_DEFINITE,
                format!("{} is not positive definite", args.matrix),
            ))
        }
        Err(e) => return Err(Failure::new(exit::FAIL, e.to_string())),
    };
    if json_out {
        println!(
            "{}",
            json!({
                "input": x.to_text(),
                "reduced": reduced.to_text(),
                "transform": u.to_string(),
                "det": u.det(),
            })
        );
    } else {
        println!("reduced:   {reduced}");
        println!("transform: {u}");
    }
    Ok(exit::PASS)
}

fn dispatch(cli: &Cli) -> CmdResult {
    let cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
            ConfigFile::parse(&text).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?
        }
        None => ConfigFile::default(),
    };
    let (b, grid) = match &cli.command {
        Command::Certify(a) => (a.b.as_deref(), None),
        Command::BoundReport(a) => (None, a.grid),
        _ => (None, None),
    };
    let run = RunConfig::resolve(cli.threads, b, grid, &cfg)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = run.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| Failure::usage(e.to_string()))?;
    pool.install(|| match &cli.command {
        Command::GenLift(a) => gen_lift(a, &cfg, cli.json),
        Command::CheckSymmetry(a) => check_symmetry(a, &cfg, cli.json),
        Command::Certify(a) => certify(a, &run, &cfg, cli.json),
        Command::BoundReport(a) => bound_report(a, &run, &cfg, cli.json),
        Command::Reduce(a) => reduce(a, cli.json),
    })
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::USAGE } else { exit::PASS };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("fjcert: {}", failure.message);
            failure.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn complex_forms() {
        let cases = [
            ("i", (0.0, 1.0)),
            ("0+1i", (0.0, 1.0)),
            ("0.1+1.2i", (0.1, 1.2)),
            ("-0.3-2i", (-0.3, -2.0)),
            ("1.5i", (0.0, 1.5)),
            ("2", (2.0, 0.0)),
            ("1e-3+2e+1i", (1e-3, 20.0)),
            (" 0.5 - i ", (0.5, -1.0)),
        ];
        for (text, (re, im)) in cases {
            assert_eq!(parse_complex(text).unwrap(), ComplexVal::new(re, im), "{text}");
        }
        assert!(parse_complex("1+xi").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn torsion_text() {
        let p = parse_torsion("2,1,0").unwrap();
        assert_eq!(p.lambda_rational(), vec![rat(1, 2)]);
        assert!(parse_torsion("0,1,1").is_err());
        assert!(parse_torsion("2,1").is_err());
    }

    #[test]
    fn config_file() {
        let cfg = ConfigFile::parse("# comment\ntheta = 0.3\n\nb=1/2 # inline\n").unwrap();
        assert_eq!(cfg.pick(None, "theta", 0.25).unwrap(), 0.3);
        assert_eq!(cfg.pick(Some(0.1), "theta", 0.25).unwrap(), 0.1);
        assert_eq!(cfg.pick(None, "eps", 0.1).unwrap(), 0.1);
        let run = RunConfig::resolve(None, None, None, &cfg).unwrap();
        assert_eq!(run.bound.b, rat(1, 2));
        let run = RunConfig::resolve(None, Some("3"), None, &cfg).unwrap();
        assert_eq!(run.bound.b, rat(3, 1));
        assert!(ConfigFile::parse("nonsense").is_err());
        assert!(ConfigFile::parse("colour = red").is_err());
        let bad = ConfigFile::parse("theta = x").unwrap();
        assert_eq!(bad.pick(None, "theta", 0.25).unwrap_err().code, exit::PARSE);
    }

    #[test]
    fn sibling_paths() {
        assert_eq!(sibling(Path::new("/tmp/r.json"), ".growth.csv"), PathBuf::from("/tmp/r.json.growth.csv"));
    }

    #[test]
    fn cusp_space_probe() {
        assert!(lift_first_cusp_form(4, 2, 2).unwrap().is_none());
        let f = lift_first_cusp_form(10, 3, 3).unwrap().unwrap();
        assert!(f.is_cuspidal() && !f.is_zero());
        let g = lift_first_cusp_form(12, 2, 3).unwrap().unwrap();
        assert!(g.is_cuspidal() && !g.is_zero());
    }
}
