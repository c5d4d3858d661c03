//! C ABI over the JSON service of the `munn` crate.
//!
//! Contexts live behind an opaque handle. Every call returns a
//! [`MunnStatus`]; results and error documents come back as JSON strings
//! owned by the caller and released with [`munn_string_free`]. A textual
//! description of the last failure on the calling thread is available from
//! [`munn_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use munn::json::{context_from_json, error_to_json};
use munn::service::{self, DecomposeMode, Options};
use munn::zpd::ProductKind;
use munn::{ErrorClass, MunnContext, MunnError};
use serde_json::Value;

/// Outcome of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MunnStatus {
    Ok = 0,
    /// Malformed JSON, literal or schema.
    InvalidInput = 1,
    /// A hypothesis of the requested operation does not hold.
    Precondition = 2,
    /// Search budget exhausted, or an INCONCLUSIVE certificate when one
    /// was required.
    SoftFailure = 3,
    NullPointer = 4,
    /// A bug: the library panicked. The handle remains usable.
    Panic = 5,
}

/// A Munn algebra `M(D, m, n, P)`.
pub struct MunnContextHandle {
    ctx: MunnContext,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &MunnError) -> MunnStatus {
    match e.class() {
        ErrorClass::Input => MunnStatus::InvalidInput,
        ErrorClass::Precondition => MunnStatus::Precondition,
        ErrorClass::Soft => MunnStatus::SoftFailure,
    }
}

fn guard(f: impl FnOnce() -> MunnStatus) -> MunnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => {
            if status == MunnStatus::Ok {
                set_last_error("");
            }
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("internal error: {msg}"));
            MunnStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, MunnError> {
    CStr::from_ptr(p).to_str().map_err(|_| MunnError::Json("input is not UTF-8".into()))
}

unsafe fn read_json(p: *const c_char) -> Result<Value, MunnError> {
    serde_json::from_str(read_str(p)?).map_err(|e| MunnError::Json(e.to_string()))
}

unsafe fn write_out(out: *mut *mut c_char, v: &Value) {
    let text = CString::new(v.to_string()).expect("json has no nul bytes");
    *out = text.into_raw();
}

/// Writes the result or the error document to `out` and maps the status.
unsafe fn finish(out: *mut *mut c_char, result: Result<(Value, bool), MunnError>) -> MunnStatus {
    match result {
        Ok((v, soft)) => {
            write_out(out, &v);
            if soft {
                set_last_error("certificate is INCONCLUSIVE");
                MunnStatus::SoftFailure
            } else {
                MunnStatus::Ok
            }
        }
        Err(e) => {
            set_last_error(&e.to_string());
            write_out(out, &error_to_json(&e));
            status_of(&e)
        }
    }
}

macro_rules! nonnull {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            set_last_error("null pointer argument");
            return MunnStatus::NullPointer;
        }
    };
}

/// Parses a context document and stores a new handle in `*out`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn munn_context_new_json(json: *const c_char, out: *mut *mut MunnContextHandle) -> MunnStatus {
    guard(|| {
        nonnull!(json, out);
        *out = ptr::null_mut();
        match read_json(json).and_then(|v| context_from_json(&v)) {
            Ok(ctx) => {
                *out = Box::into_raw(Box::new(MunnContextHandle { ctx }));
                MunnStatus::Ok
            }
            Err(e) => {
                set_last_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `handle` must come from [`munn_context_new_json`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn munn_context_free(handle: *mut MunnContextHandle) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Stores the rank of the sandwich matrix in `*out`.
///
/// # Safety
/// `handle` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn munn_context_rank(handle: *const MunnContextHandle, out: *mut usize) -> MunnStatus {
    guard(|| {
        nonnull!(handle, out);
        *out = (*handle).ctx.rank();
        MunnStatus::Ok
    })
}

/// `A • B = A P B` for element documents `{"entries": ..}`.
///
/// # Safety
/// Pointers must be valid; strings nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn munn_sandwich_product_json(
    handle: *const MunnContextHandle,
    left: *const c_char,
    right: *const c_char,
    out: *mut *mut c_char,
) -> MunnStatus {
    guard(|| {
        nonnull!(handle, left, right, out);
        let r = (|| service::multiply(&(*handle).ctx, &read_json(left)?, &read_json(right)?))();
        finish(out, r.map(|v| (v, false)))
    })
}

/// Runs the engine named by `mode` (for example `"xi2"`) on an element
/// document. `element` may be null for `"refute-r1"`.
///
/// # Safety
/// Pointers other than `element` must be valid; strings nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn munn_decompose_json(
    handle: *const MunnContextHandle,
    element: *const c_char,
    mode: *const c_char,
    seed: u64,
    budget: u64,
    out: *mut *mut c_char,
) -> MunnStatus {
    guard(|| {
        nonnull!(handle, mode, out);
        let r = (|| {
            let mode: DecomposeMode = read_str(mode)?.parse()?;
            let element = if element.is_null() { None } else { Some(read_json(element)?) };
            let opts = Options { seed, budget, ..Options::default() };
            service::decompose(&(*handle).ctx, element.as_ref(), mode, &opts)
        })();
        finish(out, r.map(|v| (v, false)))
    })
}

/// Verifies a document holding `"element"` and `"witness"`, or a
/// `"certificate"`, such as the output of [`munn_decompose_json`].
///
/// # Safety
/// Pointers must be valid; strings nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn munn_verify_json(
    handle: *const MunnContextHandle,
    document: *const c_char,
    out: *mut *mut c_char,
) -> MunnStatus {
    guard(|| {
        nonnull!(handle, document, out);
        let r = (|| service::verify(&(*handle).ctx, &read_json(document)?))();
        finish(out, r.map(|v| (v, false)))
    })
}

/// Certifies zero-product determinedness; `kind` is `"assoc"` or
/// `"jordan"`. With `require_certified`, an INCONCLUSIVE certificate is
/// still written but the status is `SoftFailure`.
///
/// # Safety
/// Pointers must be valid; strings nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn munn_check_zpd_json(
    handle: *const MunnContextHandle,
    kind: *const c_char,
    seed: u64,
    max_constraints: usize,
    require_certified: bool,
    out: *mut *mut c_char,
) -> MunnStatus {
    guard(|| {
        nonnull!(handle, kind, out);
        let r = (|| {
            let kind: ProductKind = read_str(kind)?.parse()?;
            let opts = Options { seed, max_constraints, require_certified, ..Options::default() };
            service::check_zpd(&(*handle).ctx, kind, &opts)
        })();
        finish(out, r.map(|resp| (resp.value, resp.soft_failure)))
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn munn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The last failure on this thread, or an empty string. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn munn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
