//! C ABI for the product-quotient invariant library.
//!
//! Every entry point either returns a heap-allocated JSON string (free it
//! with [`pqvar_string_free`]) or an opaque handle (free it with its
//! dedicated destructor).  On failure the return value is null and a
//! thread-local error slot holds an exit-style code and a message,
//! readable through [`pqvar_last_error_code`] and
//! [`pqvar_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use pqvar::config::load_model_path;
use pqvar::engine::Exactness;
use pqvar::error::Error;
use pqvar::model::ProductQuotientModel;
use pqvar::singularity::CyclicSingularityType;
use pqvar::{classify, report};

/// Opaque handle to a validated model plus its exactness attestation.
pub struct PqvarModel {
    model: ProductQuotientModel,
    exactness: Exactness,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<(c_int, CString)>> = const { RefCell::new(None) };
}

fn set_error(code: c_int, message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some((
            code,
            CString::new(sanitized).unwrap_or_else(|_| CString::new("error").unwrap()),
        ));
    });
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn record(e: &Error) {
    set_error(e.exit_code() as c_int, &e.to_string());
}

fn guarded<T>(f: impl FnOnce() -> Result<T, Error>) -> Option<T> {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => {
            clear_error();
            Some(v)
        }
        Ok(Err(e)) => {
            record(&e);
            None
        }
        Err(_) => {
            set_error(4, "internal panic");
            None
        }
    }
}

fn into_c_string(s: String) -> *mut c_char {
    match CString::new(s.replace('\0', " ")) {
        Ok(c) => c.into_raw(),
        Err(_) => {
            set_error(4, "string conversion failed");
            std::ptr::null_mut()
        }
    }
}

/// Exit-style code of the most recent failure on this thread:
/// 0 none, 2 usage or configuration, 3 validation, 4 internal.
#[no_mangle]
pub extern "C" fn pqvar_last_error_code() -> c_int {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(0, |(code, _)| *code))
}

/// Message of the most recent failure on this thread, or null when none.
/// The caller owns the returned string; release it with `pqvar_string_free`.
#[no_mangle]
pub extern "C" fn pqvar_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null_mut(), |(_, msg)| {
                msg.clone().into_raw()
            })
    })
}

/// Release a string returned by any function of this library.
/// Passing null is a no-op.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library that has not
/// been freed before.
#[no_mangle]
pub unsafe extern "C" fn pqvar_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Load and fully validate a model configuration file (TOML).  Returns an
/// opaque handle, or null with the error slot set.
///
/// # Safety
/// `path` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pqvar_model_load(path: *const c_char) -> *mut PqvarModel {
    if path.is_null() {
        set_error(2, "path is null");
        return std::ptr::null_mut();
    }
    let path = match unsafe { CStr::from_ptr(path) }.to_str() {
        Ok(p) => p.to_string(),
        Err(_) => {
            set_error(2, "path is not valid UTF-8");
            return std::ptr::null_mut();
        }
    };
    guarded(|| {
        let (model, exactness) = load_model_path(Path::new(&path))?;
        Ok(Box::into_raw(Box::new(PqvarModel { model, exactness })))
    })
    .unwrap_or(std::ptr::null_mut())
}

/// Release a model handle.  Passing null is a no-op.
///
/// # Safety
/// `handle` must be null or a pointer obtained from `pqvar_model_load`
/// that has not been freed before.
#[no_mangle]
pub unsafe extern "C" fn pqvar_model_free(handle: *mut PqvarModel) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

unsafe fn with_model<T>(
    handle: *const PqvarModel,
    f: impl FnOnce(&PqvarModel) -> Result<T, Error>,
) -> Option<T> {
    if handle.is_null() {
        set_error(2, "model handle is null");
        return None;
    }
    let m = unsafe { &*handle };
    guarded(|| f(m))
}

/// Hodge invariants, numerical Calabi-Yau test, and self-intersections of
/// the model, as a JSON document.
///
/// # Safety
/// `handle` must be a live pointer from `pqvar_model_load`.
#[no_mangle]
pub unsafe extern "C" fn pqvar_model_invariants_json(
    handle: *const PqvarModel,
) -> *mut c_char {
    unsafe {
        with_model(handle, |m| {
            report::to_json(&report::invariants_report(&m.model)?)
        })
    }
    .map_or(std::ptr::null_mut(), into_c_string)
}

/// Singular locus of the model by canonical type and stabilizer orbit,
/// as a JSON document.
///
/// # Safety
/// `handle` must be a live pointer from `pqvar_model_load`.
#[no_mangle]
pub unsafe extern "C" fn pqvar_model_singular_locus_json(
    handle: *const PqvarModel,
) -> *mut c_char {
    unsafe {
        with_model(handle, |m| {
            report::to_json(&report::locus_report(&m.model)?)
        })
    }
    .map_or(std::ptr::null_mut(), into_c_string)
}

/// Invariant monomial plurigenus bounds for degrees `d_from..=d_to`,
/// as a JSON document.
///
/// # Safety
/// `handle` must be a live pointer from `pqvar_model_load`.
#[no_mangle]
pub unsafe extern "C" fn pqvar_model_plurigenus_json(
    handle: *const PqvarModel,
    d_from: u32,
    d_to: u32,
) -> *mut c_char {
    unsafe {
        with_model(handle, |m| {
            if d_from == 0 || d_to < d_from {
                return Err(Error::usage(
                    "degree range must be positive and ascending",
                ));
            }
            report::to_json(&report::plurigenus_series_report(
                &m.model,
                &m.exactness,
                d_from,
                d_to,
            )?)
        })
    }
    .map_or(std::ptr::null_mut(), into_c_string)
}

/// Calabi-Yau verdict from the plurigenus counts up to `d_max`,
/// as a JSON document.
///
/// # Safety
/// `handle` must be a live pointer from `pqvar_model_load`.
#[no_mangle]
pub unsafe extern "C" fn pqvar_model_verdict_json(
    handle: *const PqvarModel,
    d_max: u32,
) -> *mut c_char {
    unsafe {
        with_model(handle, |m| {
            report::to_json(&report::verdict_report(&m.model, &m.exactness, d_max)?)
        })
    }
    .map_or(std::ptr::null_mut(), into_c_string)
}

/// Canonical volume and minimality of a two-factor model, as a JSON
/// document.  With `check_p3` the identity (P3 - P2)/2 = volume is also
/// verified.
///
/// # Safety
/// `handle` must be a live pointer from `pqvar_model_load`.
#[no_mangle]
pub unsafe extern "C" fn pqvar_model_surface_report_json(
    handle: *const PqvarModel,
    check_p3: bool,
) -> *mut c_char {
    unsafe {
        with_model(handle, |m| {
            report::to_json(&report::surface_report(&m.model, check_p3)?)
        })
    }
    .map_or(std::ptr::null_mut(), into_c_string)
}

/// Stalk ideal of the cyclic quotient singularity 1/m(w_1..w_n) at
/// pluricanonical degree `k`, as a JSON document.
///
/// # Safety
/// `weights` must point to `weight_count` readable u64 values.
#[no_mangle]
pub unsafe extern "C" fn pqvar_ideal_json(
    m: u64,
    weights: *const u64,
    weight_count: usize,
    k: u32,
) -> *mut c_char {
    if weights.is_null() || weight_count == 0 {
        set_error(2, "weights are null or empty");
        return std::ptr::null_mut();
    }
    let ws = unsafe { std::slice::from_raw_parts(weights, weight_count) }.to_vec();
    guarded(|| {
        if k == 0 {
            return Err(Error::usage("k must be at least 1"));
        }
        let t = CyclicSingularityType::new(m, ws)?;
        report::to_json(&report::ideal_report(&t, k)?)
    })
    .map_or(std::ptr::null_mut(), into_c_string)
}

/// Admissible branching data for factor genera up to `g_max`, as a JSON
/// document.  A negative `r_exact` leaves the branch-point count free.
#[no_mangle]
pub extern "C" fn pqvar_classify_json(g_max: u64, r_exact: i64) -> *mut c_char {
    guarded(|| {
        let r = if r_exact < 0 {
            None
        } else {
            Some(r_exact as usize)
        };
        let tuples = classify::enumerate_types(g_max, r)?;
        report::to_json(&report::ClassifyReport {
            format_version: report::FORMAT_VERSION,
            g_max,
            r_exact: r,
            tuple_count: tuples.len(),
            tuples,
            candidates: None,
        })
    })
    .map_or(std::ptr::null_mut(), into_c_string)
}
