//! C ABI over `fourier_jacobi`.
//!
//! Series live behind the opaque [`FjSeries`] handle. Every call returns an
//! [`FjStatus`]; on failure [`fj_last_error`] describes the problem. Strings
//! handed out by the library are released with [`fj_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fourier_jacobi::arith::{format_rational, ComplexVal};
use fourier_jacobi::cli::lift_first_cusp_form;
use fourier_jacobi::convergence::{pointwise_convergence_check, BoundConfig};
use fourier_jacobi::fjseries::FormalFJ;
use fourier_jacobi::jacobi::TorsionPoint;
use fourier_jacobi::reduction::{minkowski_reduce, SymMatQ};
use fourier_jacobi::Error;
use serde_json::json;

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FjStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    InvalidArgument = 3,
    NotCuspidal = 4,
    Hypothesis = 5,
    NotPositiveDefinite = 6,
    OutOfPrecision = 7,
    EmptyCuspSpace = 8,
    Internal = 99,
}

/// Opaque handle to a formal Fourier-Jacobi series.
pub struct FjSeries(FormalFJ);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> FjStatus {
    match e {
        Error::Parse(_) => FjStatus::Parse,
        Error::NotCuspidal | Error::NotCuspForm => FjStatus::NotCuspidal,
        Error::NotMonic | Error::RelationFails(_) => FjStatus::Hypothesis,
        Error::NotPositiveDefinite => FjStatus::NotPositiveDefinite,
        Error::OutOfPrecision { .. } => FjStatus::OutOfPrecision,
        _ => FjStatus::InvalidArgument,
    }
}

/// Runs `body`, recording the message of any error or panic.
fn guard(body: impl FnOnce() -> Result<(), (FjStatus, String)>) -> FjStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FjStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FjStatus::Internal
        }
    }
}

fn fail(e: Error) -> (FjStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (FjStatus, String) {
    (FjStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (FjStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (FjStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn series<'a>(p: *const FjSeries) -> Result<&'a FormalFJ, (FjStatus, String)> {
    p.as_ref().map(|s| &s.0).ok_or_else(|| null("series"))
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> Result<(), (FjStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(text).map_err(|_| (FjStatus::Internal, "nul byte in output".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// The message of the last failed call on this thread. Valid until the
/// next failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn fj_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` is null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fj_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Lifts the first cusp form of weight `k` and index one to slices
/// `m <= m_max`, each known below `q1^prec`.
///
/// # Safety
/// `out` points to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn fj_series_lift(k: i64, m_max: u64, prec: u64, out: *mut *mut FjSeries) -> FjStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        match lift_first_cusp_form(k, m_max, prec).map_err(fail)? {
            Some(f) => {
                *out = Box::into_raw(Box::new(FjSeries(f)));
                Ok(())
            }
            None => Err((FjStatus::EmptyCuspSpace, format!("no cusp forms of weight {k} and index one"))),
        }
    })
}

/// Reads a series from its JSON text.
///
/// # Safety
/// `json` is a nul-terminated string; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn fj_series_from_json(json: *const c_char, out: *mut *mut FjSeries) -> FjStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| (FjStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(FjSeries(FormalFJ::from_json(&v).map_err(fail)?)));
        Ok(())
    })
}

/// Writes the JSON text of a series to `*out`; free it with
/// [`fj_string_free`].
///
/// # Safety
/// `s` is a live handle; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn fj_series_to_json(s: *const FjSeries, out: *mut *mut c_char) -> FjStatus {
    guard(|| write_string(out, series(s)?.to_json().to_string()))
}

/// # Safety
/// `s` is null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fj_series_free(s: *mut FjSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Weight, `M_max` and `q1` precision of a series. Any output pointer may
/// be null.
///
/// # Safety
/// `s` is a live handle; non-null outputs are writable.
#[no_mangle]
pub unsafe extern "C" fn fj_series_shape(
    s: *const FjSeries,
    weight: *mut i64,
    m_max: *mut u64,
    prec: *mut u64,
    cuspidal: *mut bool,
) -> FjStatus {
    guard(|| {
        let f = series(s)?;
        if let Some(w) = weight.as_mut() {
            *w = f.weight();
        }
        if let Some(m) = m_max.as_mut() {
            *m = f.m_max();
        }
        if let Some(p) = prec.as_mut() {
            *p = f.precision();
        }
        if let Some(c) = cuspidal.as_mut() {
            *c = f.is_cuspidal();
        }
        Ok(())
    })
}

/// The coefficient `c(n, r, m)` as text `p/q` (or `p`).
///
/// # Safety
/// `s` is a live handle; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn fj_series_coeff(s: *const FjSeries, n: i64, r: i64, m: i64, out: *mut *mut c_char) -> FjStatus {
    guard(|| {
        let c = series(s)?.coeff_nrm(n, r, m).ok_or_else(|| {
            (
                FjStatus::OutOfPrecision,
                format!("c({n}, {r}, {m}) lies outside the stored range"),
            )
        })?;
        write_string(out, format_rational(&c))
    })
}

/// Number of symmetry violations among the coefficients with
/// `n, m <= bound`.
///
/// # Safety
/// `s` is a live handle; `violations` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn fj_series_check_symmetry(s: *const FjSeries, bound: u64, violations: *mut usize) -> FjStatus {
    guard(|| {
        let f = series(s)?;
        let count = violations.as_mut().ok_or_else(|| null("violations"))?;
        *count = f.check_symmetry(bound).violations.len();
        Ok(())
    })
}

/// Pointwise convergence check at the torsion point `z = tau1 a/N + b/N`
/// on `|q2| = theta exp(-2 pi C)`, comparing `S_M` with `S_2M`. Writes the
/// report as JSON to `*report` and the verdict to `*passed`.
///
/// # Safety
/// `s` is a live handle; `passed` and `report` point to writable storage.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn fj_certify_pointwise(
    s: *const FjSeries,
    level: u64,
    a: i64,
    b: i64,
    tau1_re: f64,
    tau1_im: f64,
    theta: f64,
    m: u64,
    passed: *mut bool,
    report: *mut *mut c_char,
) -> FjStatus {
    guard(|| {
        let f = series(s)?;
        if passed.is_null() {
            return Err(null("passed"));
        }
        let point = TorsionPoint::new(level, vec![a], vec![b]).map_err(fail)?;
        let r = pointwise_convergence_check(
            f,
            &point,
            ComplexVal::new(tau1_re, tau1_im),
            theta,
            m,
            &BoundConfig::default(),
        )
        .map_err(fail)?;
        write_string(report, r.to_json().to_string())?;
        *passed = r.passed();
        Ok(())
    })
}

/// Minkowski-reduces `"a,b;b,c"`; writes
/// `{"reduced": ..., "transform": ...}` to `*out`.
///
/// # Safety
/// `matrix` is a nul-terminated string; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn fj_reduce(matrix: *const c_char, out: *mut *mut c_char) -> FjStatus {
    guard(|| {
        let x = SymMatQ::parse(read_str(matrix, "matrix")?).map_err(fail)?;
        let (reduced, u) = minkowski_reduce(&x).map_err(fail)?;
        write_string(
            out,
            json!({ "reduced": reduced.to_text(), "transform": u.to_string() }).to_string(),
        )
    })
}
