//! C interface to crepant-lab.
//!
//! Every fallible function returns a `ClStatus` and writes its result through an out pointer.
//! On failure the message is available from `cl_last_error_message` on the same thread.
//! Strings returned by the library must be released with `cl_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use crepant_lab::counting::{self, CountError};
use crepant_lab::grouptype::{self, QuotientType, TypeError};
use crepant_lab::pipeline::{self, Budgets, DecisionReport, PipelineError, Verdict};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    NotGorenstein = 4,
    Budget = 5,
    Internal = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClVerdict {
    Resolvable = 0,
    NotResolvable = 1,
    Undecided = 2,
}

/// Opaque parsed quotient type.
pub struct ClType(QuotientType);

/// Opaque decision report.
pub struct ClReport(DecisionReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn fail(status: ClStatus, msg: impl Into<String>) -> ClStatus {
    set_error(msg);
    status
}

fn type_status(e: &TypeError) -> ClStatus {
    match e {
        TypeError::NotGorenstein => ClStatus::NotGorenstein,
        TypeError::Budget { .. } => ClStatus::Budget,
        _ => ClStatus::Parse,
    }
}

fn pipeline_status(e: &PipelineError) -> ClStatus {
    match e {
        PipelineError::Invalid(_) => ClStatus::Parse,
        PipelineError::NotGorenstein => ClStatus::NotGorenstein,
        PipelineError::Budget(_) => ClStatus::Budget,
        PipelineError::Internal(_) => ClStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> ClStatus) -> ClStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(ClStatus::Panic, msg)
        }
    }
}

fn out_string(s: String, out: *mut *mut c_char) -> ClStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            ClStatus::Ok
        }
        Err(_) => fail(ClStatus::Internal, "string contains a NUL byte"),
    }
}

/// Parses a type such as `1/12(1,2,3,6)` or `1/2(1,1,0,0)x1/2(0,1,1,0)`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cl_type_parse(text: *const c_char, out: *mut *mut ClType) -> ClStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(ClStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let s = match CStr::from_ptr(text).to_str() {
            Ok(s) => s,
            Err(e) => return fail(ClStatus::InvalidUtf8, e.to_string()),
        };
        match grouptype::parse_type(s) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(ClType(t)));
                ClStatus::Ok
            }
            Err(e) => fail(type_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `t` must come from `cl_type_parse` or be null.
#[no_mangle]
pub unsafe extern "C" fn cl_type_free(t: *mut ClType) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Group order `l`.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cl_type_order(t: *const ClType, out: *mut u64) -> ClStatus {
    if t.is_null() || out.is_null() {
        return fail(ClStatus::NullPointer, "null argument");
    }
    *out = (*t).0.order();
    ClStatus::Ok
}

/// Ambient dimension `r`.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cl_type_dim(t: *const ClType, out: *mut usize) -> ClStatus {
    if t.is_null() || out.is_null() {
        return fail(ClStatus::NullPointer, "null argument");
    }
    *out = (*t).0.r();
    ClStatus::Ok
}

/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cl_type_is_gorenstein(t: *const ClType, out: *mut bool) -> ClStatus {
    if t.is_null() || out.is_null() {
        return fail(ClStatus::NullPointer, "null argument");
    }
    *out = (*t).0.is_gorenstein();
    ClStatus::Ok
}

/// Number of lattice points in the `nu`-th dilate of the junior simplex, as a decimal string.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cl_ehrhart_eval(t: *const ClType, nu: u64, out: *mut *mut c_char) -> ClStatus {
    guard(|| {
        if t.is_null() || out.is_null() {
            return fail(ClStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        match counting::ehrhart_eval(&(*t).0, nu) {
            Ok(n) => out_string(n.to_string(), out),
            Err(e @ CountError::NotGorenstein) => fail(ClStatus::NotGorenstein, e.to_string()),
            Err(e) => {
                let pe = PipelineError::from(e);
                fail(pipeline_status(&pe), pe.to_string())
            }
        }
    })
}

/// Runs the decision pipeline. `node_budget` 0 selects the default.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cl_pipeline_run(t: *const ClType, node_budget: usize, out: *mut *mut ClReport) -> ClStatus {
    guard(|| {
        if t.is_null() || out.is_null() {
            return fail(ClStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let mut budgets = Budgets::default();
        if node_budget > 0 {
            budgets.nodes = node_budget;
        }
        match pipeline::run_pipeline(&(*t).0, &budgets) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(ClReport(r)));
                ClStatus::Ok
            }
            Err(e) => fail(pipeline_status(&e), e.to_string()),
        }
    })
}

/// Writes the verdict and the deciding step (0 when no step decided).
///
/// # Safety
/// `r` must be a live handle; `verdict` and `step` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cl_report_verdict(r: *const ClReport, verdict: *mut ClVerdict, step: *mut u8) -> ClStatus {
    if r.is_null() || verdict.is_null() || step.is_null() {
        return fail(ClStatus::NullPointer, "null argument");
    }
    let rep = &(*r).0;
    *verdict = match rep.verdict {
        Verdict::Resolvable => ClVerdict::Resolvable,
        Verdict::NotResolvable => ClVerdict::NotResolvable,
        Verdict::Undecided => ClVerdict::Undecided,
    };
    *step = rep.decided_at.unwrap_or(0);
    ClStatus::Ok
}

/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cl_report_json(r: *const ClReport, out: *mut *mut c_char) -> ClStatus {
    guard(|| {
        if r.is_null() || out.is_null() {
            return fail(ClStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        out_string((*r).0.to_json(), out)
    })
}

/// # Safety
/// `r` must come from `cl_pipeline_run` or be null.
#[no_mangle]
pub unsafe extern "C" fn cl_report_free(r: *mut ClReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn cl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn cl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
