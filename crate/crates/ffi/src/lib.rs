//! C ABI for the locclab library.
//!
//! Objects cross the boundary as opaque handles created and destroyed by
//! this library; every fallible call returns a [`LocclabStatus`] and leaves
//! a message retrievable through [`locclab_last_error_message`] on failure.
//! Strings returned to the caller are NUL-terminated copies that must be
//! released with [`locclab_string_free`].
//!
//! The generated header lands in `include/locclab.h` at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use locclab::analysis::{
    bell_ensemble, check_orthogonality, domino_ensemble, holism_verdict, HolismVerdict, Verdict,
};
use locclab::cli::parse_ensemble;
use locclab::error::Error;
use locclab::locc::Ensemble;

/// Result of a fallible call. Mirrors the CLI exit-code contract.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocclabStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// Input text failed to parse.
    ParseError = 2,
    /// Inputs violated a precondition.
    PreconditionError = 3,
    /// An internal invariant was breached (or a panic was caught).
    InternalError = 4,
}

/// Opaque handle to a labelled state ensemble.
pub struct LocclabEnsemble {
    inner: Ensemble,
}

/// Opaque handle to a holism verdict report.
pub struct LocclabVerdict {
    inner: HolismVerdict,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).ok();
    });
}

fn status_of(error: &Error) -> LocclabStatus {
    match error.exit_code() {
        2 => LocclabStatus::ParseError,
        4 => LocclabStatus::InternalError,
        _ => LocclabStatus::PreconditionError,
    }
}

fn fail(error: &Error) -> LocclabStatus {
    set_last_error(&error.to_string());
    status_of(error)
}

fn null_argument(what: &str) -> LocclabStatus {
    set_last_error(&format!("null argument: {}", what));
    LocclabStatus::NullArgument
}

fn guard(body: impl FnOnce() -> LocclabStatus) -> LocclabStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("panic caught at the FFI boundary");
            LocclabStatus::InternalError
        }
    }
}

/// Copy of the most recent error message on this thread, or NULL if no
/// error has occurred. Free with `locclab_string_free`.
#[no_mangle]
pub extern "C" fn locclab_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Releases a string previously returned by this library.
///
/// # Safety
/// `s` must have been returned by a locclab function and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn locclab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The nine-product-state ensemble on 3x3.
#[no_mangle]
pub extern "C" fn locclab_ensemble_domino() -> *mut LocclabEnsemble {
    Box::into_raw(Box::new(LocclabEnsemble {
        inner: domino_ensemble(),
    }))
}

/// The Bell ensemble with `n` members (2 or 4); NULL on invalid `n`.
#[no_mangle]
pub extern "C" fn locclab_ensemble_bell(n: u32) -> *mut LocclabEnsemble {
    match bell_ensemble(n as usize) {
        Ok(ensemble) => Box::into_raw(Box::new(LocclabEnsemble { inner: ensemble })),
        Err(e) => {
            set_last_error(&e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// Parses ensemble-file text into a handle stored in `*out`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn locclab_ensemble_parse(
    text: *const c_char,
    out: *mut *mut LocclabEnsemble,
) -> LocclabStatus {
    guard(|| {
        if text.is_null() {
            return null_argument("text");
        }
        if out.is_null() {
            return null_argument("out");
        }
        let text = match CStr::from_ptr(text).to_str() {
            Ok(t) => t,
            Err(_) => {
                set_last_error("ensemble text is not valid UTF-8");
                return LocclabStatus::ParseError;
            }
        };
        match parse_ensemble(text) {
            Ok(ensemble) => {
                *out = Box::into_raw(Box::new(LocclabEnsemble { inner: ensemble }));
                LocclabStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases an ensemble handle.
///
/// # Safety
/// `ensemble` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn locclab_ensemble_free(ensemble: *mut LocclabEnsemble) {
    if !ensemble.is_null() {
        drop(Box::from_raw(ensemble));
    }
}

/// Number of members, or 0 for a NULL handle.
///
/// # Safety
/// `ensemble` must be a live handle from this library (or NULL).
#[no_mangle]
pub unsafe extern "C" fn locclab_ensemble_member_count(
    ensemble: *const LocclabEnsemble,
) -> u32 {
    if ensemble.is_null() {
        return 0;
    }
    (*ensemble).inner.len() as u32
}

/// Writes the party dimensions into `d_a` and `d_b`.
///
/// # Safety
/// All pointers must be valid; `ensemble` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn locclab_ensemble_dims(
    ensemble: *const LocclabEnsemble,
    d_a: *mut u32,
    d_b: *mut u32,
) -> LocclabStatus {
    if ensemble.is_null() {
        return null_argument("ensemble");
    }
    if d_a.is_null() || d_b.is_null() {
        return null_argument("d_a/d_b");
    }
    let dims = (*ensemble).inner.dims();
    *d_a = dims.0 as u32;
    *d_b = dims.1 as u32;
    LocclabStatus::Ok
}

/// Pairwise orthogonality census: writes whether all members are mutually
/// orthogonal and the largest overlap found.
///
/// # Safety
/// All pointers must be valid; `ensemble` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn locclab_check_orthogonality(
    ensemble: *const LocclabEnsemble,
    orthogonal: *mut bool,
    max_overlap: *mut f64,
) -> LocclabStatus {
    guard(|| {
        if ensemble.is_null() {
            return null_argument("ensemble");
        }
        if orthogonal.is_null() || max_overlap.is_null() {
            return null_argument("orthogonal/max_overlap");
        }
        match check_orthogonality(&(*ensemble).inner) {
            Ok(report) => {
                *orthogonal = report.orthogonal;
                *max_overlap = report.max_overlap;
                LocclabStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Runs the full holism analysis (`samples` Haar draws per party scan
/// under `seed`) and stores the verdict handle in `*out`.
///
/// # Safety
/// All pointers must be valid; `ensemble` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn locclab_holism_verdict(
    ensemble: *const LocclabEnsemble,
    samples: u32,
    seed: u64,
    out: *mut *mut LocclabVerdict,
) -> LocclabStatus {
    guard(|| {
        if ensemble.is_null() {
            return null_argument("ensemble");
        }
        if out.is_null() {
            return null_argument("out");
        }
        match holism_verdict(&(*ensemble).inner, samples as usize, seed) {
            Ok(verdict) => {
                *out = Box::into_raw(Box::new(LocclabVerdict { inner: verdict }));
                LocclabStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a verdict handle.
///
/// # Safety
/// `verdict` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn locclab_verdict_free(verdict: *mut LocclabVerdict) {
    if !verdict.is_null() {
        drop(Box::from_raw(verdict));
    }
}

/// True when the verdict is "holism-evidence".
///
/// # Safety
/// `verdict` must be a live handle (or NULL, which reads as false).
#[no_mangle]
pub unsafe extern "C" fn locclab_verdict_is_holism_evidence(
    verdict: *const LocclabVerdict,
) -> bool {
    if verdict.is_null() {
        return false;
    }
    (*verdict).inner.verdict == Verdict::HolismEvidence
}

/// Success probability of the joint basis measurement.
///
/// # Safety
/// `verdict` must be a live handle (or NULL, which reads as NaN).
#[no_mangle]
pub unsafe extern "C" fn locclab_verdict_global_success(verdict: *const LocclabVerdict) -> f64 {
    if verdict.is_null() {
        return f64::NAN;
    }
    (*verdict).inner.global_success
}

/// Best success over the candidate-protocol library.
///
/// # Safety
/// `verdict` must be a live handle (or NULL, which reads as NaN).
#[no_mangle]
pub unsafe extern "C" fn locclab_verdict_best_locc_success(
    verdict: *const LocclabVerdict,
) -> f64 {
    if verdict.is_null() {
        return f64::NAN;
    }
    (*verdict).inner.best_locc_success_found
}

/// Fraction of scanned bases that spoiled the ensemble (both parties).
///
/// # Safety
/// `verdict` must be a live handle (or NULL, which reads as NaN).
#[no_mangle]
pub unsafe extern "C" fn locclab_verdict_spoil_fraction(verdict: *const LocclabVerdict) -> f64 {
    if verdict.is_null() {
        return f64::NAN;
    }
    (*verdict).inner.spoil_fraction
}

/// Name of the best candidate protocol. Free with `locclab_string_free`.
///
/// # Safety
/// `verdict` must be a live handle (or NULL, which yields NULL).
#[no_mangle]
pub unsafe extern "C" fn locclab_verdict_best_protocol(
    verdict: *const LocclabVerdict,
) -> *mut c_char {
    if verdict.is_null() {
        return std::ptr::null_mut();
    }
    CString::new((*verdict).inner.best_protocol.clone())
        .map(CString::into_raw)
        .unwrap_or(std::ptr::null_mut())
}

/// The fixed evidence caveat. Free with `locclab_string_free`.
///
/// # Safety
/// `verdict` must be a live handle (or NULL, which yields NULL).
#[no_mangle]
pub unsafe extern "C" fn locclab_verdict_caveat(verdict: *const LocclabVerdict) -> *mut c_char {
    if verdict.is_null() {
        return std::ptr::null_mut();
    }
    CString::new((*verdict).inner.caveat.clone())
        .map(CString::into_raw)
        .unwrap_or(std::ptr::null_mut())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn take_string(ptr: *mut c_char) -> String {
        assert!(!ptr.is_null());
        let s = unsafe { CStr::from_ptr(ptr) }.to_string_lossy().into_owned();
        unsafe { locclab_string_free(ptr) };
        s
    }

    #[test]
    fn domino_handle_reports_shape() {
        let handle = locclab_ensemble_domino();
        assert!(!handle.is_null());
        unsafe {
            assert_eq!(locclab_ensemble_member_count(handle), 9);
            let (mut da, mut db) = (0u32, 0u32);
            assert_eq!(
                locclab_ensemble_dims(handle, &mut da, &mut db),
                LocclabStatus::Ok
            );
            assert_eq!((da, db), (3, 3));
            let (mut ortho, mut overlap) = (false, 1.0f64);
            assert_eq!(
                locclab_check_orthogonality(handle, &mut ortho, &mut overlap),
                LocclabStatus::Ok
            );
            assert!(ortho);
            assert!(overlap < 1e-12);
            locclab_ensemble_free(handle);
        }
    }

    #[test]
    fn parse_round_trip_through_the_abi() {
        let text = CString::new(
            "DIMS 2 2\nSTATE psi- 1.0 (0,0) (0.70710678118654752,0) \
             (-0.70710678118654752,0) (0,0)\n",
        )
        .unwrap();
        let mut handle: *mut LocclabEnsemble = std::ptr::null_mut();
        let status = unsafe { locclab_ensemble_parse(text.as_ptr(), &mut handle) };
        assert_eq!(status, LocclabStatus::Ok);
        unsafe {
            assert_eq!(locclab_ensemble_member_count(handle), 1);
            locclab_ensemble_free(handle);
        }
    }

    #[test]
    fn parse_errors_surface_with_messages() {
        let text = CString::new("DIMS 2 2\nSTATE x 1.0 (1,0) (0,0) (0,0)\n").unwrap();
        let mut handle: *mut LocclabEnsemble = std::ptr::null_mut();
        let status = unsafe { locclab_ensemble_parse(text.as_ptr(), &mut handle) };
        assert_eq!(status, LocclabStatus::ParseError);
        let message = take_string(locclab_last_error_message());
        assert!(message.contains("E_DIMS"), "message was '{}'", message);

        let status = unsafe { locclab_ensemble_parse(std::ptr::null(), &mut handle) };
        assert_eq!(status, LocclabStatus::NullArgument);
    }

    #[test]
    fn verdict_flows_through_the_abi() {
        let ensemble = locclab_ensemble_bell(2);
        assert!(!ensemble.is_null());
        let mut verdict: *mut LocclabVerdict = std::ptr::null_mut();
        let status = unsafe { locclab_holism_verdict(ensemble, 8, 42, &mut verdict) };
        assert_eq!(status, LocclabStatus::Ok);
        unsafe {
            assert!(!locclab_verdict_is_holism_evidence(verdict));
            assert!((locclab_verdict_global_success(verdict) - 1.0).abs() < 1e-9);
            assert!((locclab_verdict_best_locc_success(verdict) - 1.0).abs() < 1e-9);
            let name = take_string(locclab_verdict_best_protocol(verdict));
            assert_eq!(name, "bell-parity");
            let caveat = take_string(locclab_verdict_caveat(verdict));
            assert!(caveat.contains("sample-based"));
            locclab_verdict_free(verdict);
            locclab_ensemble_free(ensemble);
        }
    }

    #[test]
    fn bell_handle_rejects_other_sizes() {
        let bad = locclab_ensemble_bell(3);
        assert!(bad.is_null());
        let message = take_string(locclab_last_error_message());
        assert!(message.contains("2 or 4"));
    }
}
