//! C ABI over the `terai` crate.
//!
//! Objects cross the boundary as opaque handles. Every function returns a
//! [`TeraiStatus`]; on failure a message is kept per thread and can be read
//! with [`terai_last_error_message`]. Strings handed out by this library must
//! be released with [`terai_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use terai::arith::jacobi;
use terai::report::{render_json, solutions_json, verification_config, verification_json};
use terai::solver::{find_solutions, verify_instance, Bounds, Verdict, VerificationReport};
use terai::triples::{check_hypotheses, make_instance, TeraiInstance};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TeraiStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Precondition = 3,
    Utf8 = 4,
    Internal = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TeraiVerdict {
    TheoremConsistent = 0,
    Violation = 1,
    Inconclusive = 2,
}

/// Opaque instance handle.
pub struct TeraiInstanceHandle(TeraiInstance);

/// Opaque verification report handle.
pub struct TeraiReportHandle(VerificationReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: TeraiStatus, msg: impl Into<String>) -> TeraiStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> TeraiStatus) -> TeraiStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(TeraiStatus::Internal, "panic inside terai"),
    }
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, TeraiStatus> {
    if p.is_null() {
        return Err(fail(TeraiStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(TeraiStatus::Utf8, format!("{name} is not UTF-8")))
}

unsafe fn read_nat(p: *const c_char, name: &str) -> Result<num_bigint::BigUint, TeraiStatus> {
    let s = read_str(p, name)?;
    s.trim()
        .parse()
        .map_err(|_| fail(TeraiStatus::InvalidArgument, format!("{name} is not a nonnegative integer: {s:?}")))
}

unsafe fn hand_out_string(s: String, out: *mut *mut c_char) -> TeraiStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            TeraiStatus::Ok
        }
        Err(_) => fail(TeraiStatus::Internal, "output contained a NUL byte"),
    }
}

/// Builds the instance for `m > n > 0` given as decimal strings.
///
/// # Safety
/// `m` and `n` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn terai_instance_new(
    m: *const c_char,
    n: *const c_char,
    out: *mut *mut TeraiInstanceHandle,
) -> TeraiStatus {
    guard(|| {
        if out.is_null() {
            return fail(TeraiStatus::NullPointer, "out is null");
        }
        let (m, n) = match (read_nat(m, "m"), read_nat(n, "n")) {
            (Ok(m), Ok(n)) => (m, n),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match make_instance(&m, &n) {
            Ok(inst) => {
                *out = Box::into_raw(Box::new(TeraiInstanceHandle(inst)));
                TeraiStatus::Ok
            }
            Err(e) => fail(TeraiStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// # Safety
/// `handle` must come from [`terai_instance_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn terai_instance_free(handle: *mut TeraiInstanceHandle) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Writes 1 to `out` when the instance meets every hypothesis, else 0.
///
/// # Safety
/// `handle` must be a live instance handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn terai_instance_qualifies(handle: *const TeraiInstanceHandle, out: *mut i32) -> TeraiStatus {
    guard(|| {
        if handle.is_null() || out.is_null() {
            return fail(TeraiStatus::NullPointer, "handle or out is null");
        }
        *out = i32::from(check_hypotheses(&(*handle).0).qualifies);
        TeraiStatus::Ok
    })
}

/// Runs the verification pipeline with default bounds.
///
/// # Safety
/// `handle` must be a live instance handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn terai_verify(
    handle: *const TeraiInstanceHandle,
    out: *mut *mut TeraiReportHandle,
) -> TeraiStatus {
    guard(|| {
        if handle.is_null() || out.is_null() {
            return fail(TeraiStatus::NullPointer, "handle or out is null");
        }
        let inst = &(*handle).0;
        let hyp = check_hypotheses(inst);
        if !hyp.qualifies {
            return fail(
                TeraiStatus::Precondition,
                format!("hypotheses not satisfied; unmet: {}", hyp.failures().join("; ")),
            );
        }
        let report = verify_instance(inst, &Bounds::default());
        *out = Box::into_raw(Box::new(TeraiReportHandle(report)));
        TeraiStatus::Ok
    })
}

/// # Safety
/// `report` must be a live report handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn terai_report_verdict(report: *const TeraiReportHandle, out: *mut TeraiVerdict) -> TeraiStatus {
    guard(|| {
        if report.is_null() || out.is_null() {
            return fail(TeraiStatus::NullPointer, "report or out is null");
        }
        *out = match (*report).0.verdict {
            Verdict::TheoremConsistent => TeraiVerdict::TheoremConsistent,
            Verdict::Violation => TeraiVerdict::Violation,
            Verdict::Inconclusive => TeraiVerdict::Inconclusive,
        };
        TeraiStatus::Ok
    })
}

/// Canonical JSON for the report. Free the result with [`terai_string_free`].
///
/// # Safety
/// `report` must be a live report handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn terai_report_json(report: *const TeraiReportHandle, out: *mut *mut c_char) -> TeraiStatus {
    guard(|| {
        if report.is_null() || out.is_null() {
            return fail(TeraiStatus::NullPointer, "report or out is null");
        }
        let r = &(*report).0;
        hand_out_string(render_json(&verification_json(r, verification_config(r))), out)
    })
}

/// # Safety
/// `report` must come from [`terai_verify`] or be null.
#[no_mangle]
pub unsafe extern "C" fn terai_report_free(report: *mut TeraiReportHandle) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Jacobi symbol `(a/n)` for decimal `a` (may be negative) and odd positive `n`.
///
/// # Safety
/// `a` and `n` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn terai_jacobi(a: *const c_char, n: *const c_char, out: *mut i32) -> TeraiStatus {
    guard(|| {
        if out.is_null() {
            return fail(TeraiStatus::NullPointer, "out is null");
        }
        let a_text = match read_str(a, "a") {
            Ok(s) => s,
            Err(s) => return s,
        };
        let a: num_bigint::BigInt = match a_text.trim().parse() {
            Ok(v) => v,
            Err(_) => return fail(TeraiStatus::InvalidArgument, format!("a is not an integer: {a_text:?}")),
        };
        let n = match read_nat(n, "n") {
            Ok(v) => v,
            Err(s) => return s,
        };
        match jacobi(&a, &n) {
            Ok(v) => {
                *out = i32::from(v.as_i8());
                TeraiStatus::Ok
            }
            Err(e) => fail(TeraiStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Solutions of `x^2 + b^y = c^z` as a JSON array of `[x, y, z]` strings.
///
/// # Safety
/// `b` and `c` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn terai_find_solutions_json(
    b: *const c_char,
    c: *const c_char,
    y_max: u32,
    z_max: u32,
    out: *mut *mut c_char,
) -> TeraiStatus {
    guard(|| {
        if out.is_null() {
            return fail(TeraiStatus::NullPointer, "out is null");
        }
        let (b, c) = match (read_nat(b, "b"), read_nat(c, "c")) {
            (Ok(b), Ok(c)) => (b, c),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match find_solutions(&b, &c, y_max, z_max) {
            Ok(sols) => hand_out_string(render_json(&solutions_json(&sols)), out),
            Err(e) => fail(TeraiStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn terai_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn terai_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
