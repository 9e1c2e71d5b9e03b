//! C ABI for `sparsereal`.
//!
//! Every fallible function returns an [`SrStatus`]. On failure a message is
//! kept per thread and can be read with [`sr_last_error_message`]. Results
//! that are not plain integers come back as heap-allocated UTF-8 strings
//! (JSON documents, or rationals written `p/q`) that the caller releases
//! with [`sr_string_free`]. Systems and k-sums are opaque handles created by
//! [`sr_system_from_json`] and [`sr_ksum_parse`] and released by the matching
//! `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rug::{Integer, Rational};
use sparsereal::binomial::{solve_wedge, BinomialSystem};
use sparsereal::bounds::{compare_bounds, polytope_volume_bound};
use sparsereal::ksum::KSum;
use sparsereal::lattice::{smith_normal_form, IntMatrix};
use sparsereal::parse::{parse_ksum, parse_real_literal};
use sparsereal::polytope::{convex_hull, Point};
use sparsereal::roots1d::{solve_one_alternation, SolveRequest};
use sparsereal::system::SparseSystem;
use sparsereal::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Text input did not parse.
    ParseError = 3,
    /// Input parsed but violates a precondition.
    InvalidInput = 4,
    /// The computation could not be completed or certified.
    SolverError = 5,
    /// A result does not fit the requested output type.
    Overflow = 6,
    /// A panic was caught at the boundary.
    Panic = 7,
}

/// A polynomial system with equations and strict inequalities.
pub struct SrSystem(SparseSystem);

/// An exponential sum `Σ c_i x^(a_i)` with rational exponents.
pub struct SrKSum(KSum);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(SrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse(_) => SrStatus::ParseError,
            ref other if other.is_input_error() => SrStatus::InvalidInput,
            _ => SrStatus::SolverError,
        };
        Failure(status, format!("{}: {e}", e.code()))
    }
}

type Outcome<T> = Result<T, Failure>;

/// Runs `body`, records any error and converts panics into a status.
fn guard(body: impl FnOnce() -> Outcome<()>) -> SrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SrStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SrStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Outcome<&'a str> {
    if p.is_null() {
        return Err(Failure(SrStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(SrStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Outcome<&'a mut T> {
    p.as_mut()
        .ok_or_else(|| Failure(SrStatus::NullPointer, format!("{what} is null")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Outcome<&'a T> {
    p.as_ref()
        .ok_or_else(|| Failure(SrStatus::NullPointer, format!("{what} is null")))
}

fn number(s: &str, what: &str) -> Outcome<Rational> {
    parse_real_literal(s.trim()).ok_or_else(|| {
        Failure(
            SrStatus::ParseError,
            format!("{what}: '{s}' is not a number"),
        )
    })
}

fn json_in(s: &str) -> Outcome<serde_json::Value> {
    serde_json::from_str(s).map_err(|e| Failure(SrStatus::ParseError, format!("invalid JSON: {e}")))
}

fn string_out(s: String, out: &mut *mut c_char) -> Outcome<()> {
    *out = CString::new(s)
        .map_err(|_| Failure(SrStatus::Overflow, "output contains NUL".into()))?
        .into_raw();
    Ok(())
}

fn json_out<T: serde::Serialize>(v: &T, out: &mut *mut c_char) -> Outcome<()> {
    string_out(
        serde_json::to_string(v).expect("output types serialize"),
        out,
    )
}

fn int_rows(entries: *const i64, rows: usize, cols: usize) -> Outcome<Vec<Vec<Integer>>> {
    if rows * cols > 0 && entries.is_null() {
        return Err(Failure(SrStatus::NullPointer, "entries is null".into()));
    }
    let flat = if rows * cols == 0 {
        &[][..]
    } else {
        unsafe { std::slice::from_raw_parts(entries, rows * cols) }
    };
    Ok(flat
        .chunks(cols.max(1))
        .take(rows)
        .map(|r| r.iter().map(|&x| Integer::from(x)).collect())
        .collect())
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn sr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Reads a system from JSON `{"n": 2, "equations": [...], "inequalities": [...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_system_from_json(
    json: *const c_char,
    out: *mut *mut SrSystem,
) -> SrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let sys = SparseSystem::from_json(&json_in(text(json, "json")?)?)?;
        *out = Box::into_raw(Box::new(SrSystem(sys)));
        Ok(())
    })
}

/// # Safety
/// `sys` must come from [`sr_system_from_json`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sr_system_free(sys: *mut SrSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Dimension `n` of the ambient space.
///
/// # Safety
/// `sys` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sr_system_dimension(sys: *const SrSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.0.n())
}

/// Full bound report as JSON.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_system_bound_report(
    sys: *const SrSystem,
    out: *mut *mut c_char,
) -> SrStatus {
    guard(|| {
        let sys = handle(sys, "sys")?;
        json_out(&compare_bounds(&sys.0)?, out_ptr(out, "out")?)
    })
}

/// The polytope-volume component bound as a rational `p/q` string.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_system_volume_bound(
    sys: *const SrSystem,
    out: *mut *mut c_char,
) -> SrStatus {
    guard(|| {
        let sys = handle(sys, "sys")?;
        string_out(
            polytope_volume_bound(&sys.0)?.to_string(),
            out_ptr(out, "out")?,
        )
    })
}

/// Parses a k-sum such as `"x^(7/3) - 3*x^0.5 - 1"`.
///
/// # Safety
/// `src` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_ksum_parse(src: *const c_char, out: *mut *mut SrKSum) -> SrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let f = parse_ksum(text(src, "text")?).map_err(Error::from)?;
        *out = Box::into_raw(Box::new(SrKSum(f)));
        Ok(())
    })
}

/// # Safety
/// `f` must come from [`sr_ksum_parse`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sr_ksum_free(f: *mut SrKSum) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of sign alternations, or `SIZE_MAX` for a null handle.
///
/// # Safety
/// `f` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sr_ksum_sign_alternations(f: *const SrKSum) -> usize {
    f.as_ref().map_or(usize::MAX, |f| f.0.sign_alternations())
}

/// Approximates the positive root in `(0, R]` of a k-sum with one sign
/// alternation. `r` and `eps` are decimal or `p/q` strings; a zero
/// `precision_bits` keeps the default. Writes the root as JSON, or `null`
/// when there is no root in range.
///
/// # Safety
/// `f` must be a live handle; `r` and `eps` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sr_ksum_solve(
    f: *const SrKSum,
    r: *const c_char,
    eps: *const c_char,
    precision_bits: u32,
    out: *mut *mut c_char,
) -> SrStatus {
    guard(|| {
        let f = handle(f, "f")?;
        let mut req = SolveRequest::new(
            f.0.clone(),
            number(text(r, "R")?, "R")?,
            number(text(eps, "eps")?, "eps")?,
        );
        if precision_bits > 0 {
            req = req.with_precision(precision_bits);
        }
        json_out(&solve_one_alternation(&req)?, out_ptr(out, "out")?)
    })
}

/// Positive root of the binomial system given as JSON
/// `{"D": [[...]], "c": [...], "R": ..., "epsilon": ...}`; writes the solution as JSON.
///
/// # Safety
/// `json` must be NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sr_binomial_solve(
    json: *const c_char,
    precision_bits: u32,
    out: *mut *mut c_char,
) -> SrStatus {
    guard(|| {
        let sys = BinomialSystem::from_json(&json_in(text(json, "json")?)?)?;
        let bits = (precision_bits > 0).then_some(precision_bits);
        json_out(&solve_wedge(&sys, bits)?, out_ptr(out, "out")?)
    })
}

/// Smith normal form of the row-major `n x n` matrix `entries`. Writes the
/// `n` diagonal entries to `diagonal`, or fails with `Overflow` if one does
/// not fit in 64 bits.
///
/// # Safety
/// `entries` must hold `n*n` values and `diagonal` room for `n`.
#[no_mangle]
pub unsafe extern "C" fn sr_smith_diagonal(
    entries: *const i64,
    n: usize,
    diagonal: *mut i64,
) -> SrStatus {
    guard(|| {
        if n > 0 && diagonal.is_null() {
            return Err(Failure(SrStatus::NullPointer, "diagonal is null".into()));
        }
        let a = IntMatrix::new(int_rows(entries, n, n)?)?;
        let snf = smith_normal_form(&a)?;
        for (i, d) in snf.diagonal().iter().enumerate() {
            *diagonal.add(i) = d
                .to_i64()
                .ok_or_else(|| Failure(SrStatus::Overflow, format!("diagonal entry {d}")))?;
        }
        Ok(())
    })
}

/// Smith normal form with transforms `U`, `V` as JSON.
///
/// # Safety
/// `entries` must hold `n*n` values; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sr_smith_json(
    entries: *const i64,
    n: usize,
    out: *mut *mut c_char,
) -> SrStatus {
    guard(|| {
        let a = IntMatrix::new(int_rows(entries, n, n)?)?;
        json_out(&smith_normal_form(&a)?, out_ptr(out, "out")?)
    })
}

/// Normalized volume (`dim!` times Euclidean) of the convex hull of `count`
/// integer points of dimension `dim`, stored row-major; written as `p/q`.
///
/// # Safety
/// `coords` must hold `count*dim` values; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sr_normalized_volume(
    coords: *const i64,
    count: usize,
    dim: usize,
    out: *mut *mut c_char,
) -> SrStatus {
    guard(|| {
        let pts: Vec<Point> = int_rows(coords, count, dim)?
            .into_iter()
            .map(|r| Point::new(r.into_iter().map(Rational::from).collect()))
            .collect();
        let hull = convex_hull(&pts, dim)?;
        string_out(hull.volume().value().to_string(), out_ptr(out, "out")?)
    })
}
