//! C interface to `hfl_core`.
//!
//! Fields and parameter sets cross the boundary as opaque handles created by
//! `*_new`/`*_from_json` and released by the matching `*_free`. Every fallible
//! function returns an [`HflStatus`]; on failure the message is available from
//! [`hfl_last_error`] on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hfl_core::construct::{charp_params, surrogate_params};
use hfl_core::hypergraph::Relation;
use hfl_core::symfun::sim_injectivity;
use hfl_core::{ConstructionParams, Error, ErrorKind, Field, FieldCtx, PointSet, Poly};

/// Result codes. The nonzero hypothesis, budget and I/O codes match the exit
/// codes of the `hfl` binary.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HflStatus {
    Ok = 0,
    NullArgument = 1,
    Hypothesis = 2,
    Budget = 3,
    Io = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

/// A finite field `F_{p^k}`.
pub struct HflField(Field);

/// A validated construction parameter set.
pub struct HflParams(ConstructionParams);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HflStatus {
    match e.kind() {
        ErrorKind::Hypothesis => HflStatus::Hypothesis,
        ErrorKind::Budget => HflStatus::Budget,
        ErrorKind::Io => HflStatus::Io,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), HflStatus>) -> HflStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HflStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_last_error("internal panic");
            HflStatus::Panic
        }
    }
}

fn fail(e: Error) -> HflStatus {
    set_last_error(&e.to_string());
    status_of(&e)
}

fn null(what: &str) -> HflStatus {
    set_last_error(&format!("{what} is NULL"));
    HflStatus::NullArgument
}

/// # Safety
/// `data` must point to `len` readable values, or `len` must be 0.
unsafe fn slice<'a, T>(data: *const T, len: usize, what: &str) -> Result<&'a [T], HflStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null, and the caller promises `len` readable elements.
    Ok(unsafe { std::slice::from_raw_parts(data, len) })
}

/// # Safety
/// `p` must be NULL or point to a live value of type `T`.
unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, HflStatus> {
    // SAFETY: forwarded from the caller.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

/// Message of the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hfl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds `F_{p^k}`. With `modulus_len = 0` the default defining polynomial
/// is used; otherwise `modulus` holds `k + 1` coefficients, low degree first.
///
/// # Safety
/// `modulus` must point to `modulus_len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hfl_field_new(
    p: u64,
    k: u32,
    modulus: *const u64,
    modulus_len: usize,
    out: *mut *mut HflField,
) -> HflStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        // SAFETY: caller contract.
        let m = unsafe { slice(modulus, modulus_len, "modulus")? };
        let field = FieldCtx::new(p, k, (!m.is_empty()).then_some(m)).map_err(fail)?;
        // SAFETY: `out` checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(HflField(field))) };
        Ok(())
    })
}

/// Number of elements, or 0 for a NULL handle.
///
/// # Safety
/// `field` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hfl_field_order(field: *const HflField) -> u64 {
    // SAFETY: caller contract.
    unsafe { field.as_ref() }.map_or(0, |f| f.0.order())
}

/// # Safety
/// `field` must be NULL or a handle from [`hfl_field_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hfl_field_free(field: *mut HflField) {
    if !field.is_null() {
        // SAFETY: allocated by `Box::into_raw` in `hfl_field_new`.
        drop(unsafe { Box::from_raw(field) });
    }
}

fn put_params(out: *mut *mut HflParams, params: ConstructionParams) {
    // SAFETY: callers check `out` before building parameters.
    unsafe { *out = Box::into_raw(Box::new(HflParams(params))) };
}

/// Parses and validates a parameter document as written by `hfl construct`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hfl_params_from_json(json: *const c_char, out: *mut *mut HflParams) -> HflStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        // SAFETY: caller promises a NUL-terminated string.
        let text = unsafe { CStr::from_ptr(json) }.to_str().map_err(|_| {
            set_last_error("json is not valid UTF-8");
            HflStatus::InvalidUtf8
        })?;
        put_params(out, ConstructionParams::from_json(text).map_err(fail)?);
        Ok(())
    })
}

/// Faithful positive-characteristic parameters; `betas` holds `k` residues.
///
/// # Safety
/// `betas` must point to `betas_len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hfl_params_charp(
    n: usize,
    p: u64,
    k: usize,
    betas: *const u64,
    betas_len: usize,
    out: *mut *mut HflParams,
) -> HflStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        // SAFETY: caller contract.
        let b = unsafe { slice(betas, betas_len, "betas")? };
        put_params(out, charp_params(n, p, k, b).map_err(fail)?);
        Ok(())
    })
}

/// Small-degree parameters with `q = p` (odd `p`) or `q = 2^l` (`p = 2`).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hfl_params_surrogate(n: usize, p: u64, t: u64, l: u32, out: *mut *mut HflParams) -> HflStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        put_params(out, surrogate_params(n, p, t, l).map_err(fail)?);
        Ok(())
    })
}

/// Degree `m` of `g` in `T`, or 0 for a NULL handle.
///
/// # Safety
/// `params` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hfl_params_degree(params: *const HflParams) -> u64 {
    // SAFETY: caller contract.
    unsafe { params.as_ref() }.map_or(0, |p| p.0.m)
}

/// Serializes parameters; release the string with [`hfl_string_free`].
///
/// # Safety
/// `params` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hfl_params_to_json(params: *const HflParams, out: *mut *mut c_char) -> HflStatus {
    guard(|| {
        // SAFETY: caller contract.
        let p = unsafe { handle(params, "params")? };
        if out.is_null() {
            return Err(null("out"));
        }
        let text = p.0.to_json().map_err(fail)?;
        let c = CString::new(text).expect("JSON has no NUL bytes");
        // SAFETY: checked non-null.
        unsafe { *out = c.into_raw() };
        Ok(())
    })
}

/// # Safety
/// `params` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hfl_params_free(params: *mut HflParams) {
    if !params.is_null() {
        // SAFETY: allocated by `Box::into_raw` in `put_params`.
        drop(unsafe { Box::from_raw(params) });
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hfl_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by `CString::into_raw`.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Evaluates the relation on `len` distinct points. The characteristic of
/// `field` must match the parameters unless `allow_foreign_char` is set.
///
/// # Safety
/// Handles must be live; `points` must hold `len` values; the output
/// pointers must be writable (`degenerate` may be NULL).
#[no_mangle]
pub unsafe extern "C" fn hfl_relation(
    params: *const HflParams,
    field: *const HflField,
    points: *const u64,
    len: usize,
    allow_foreign_char: bool,
    in_r: *mut bool,
    degenerate: *mut bool,
) -> HflStatus {
    guard(|| {
        // SAFETY: caller contract for every pointer below.
        let (p, f) = unsafe { (handle(params, "params")?, handle(field, "field")?) };
        let pts = unsafe { slice(points, len, "points")? };
        if in_r.is_null() {
            return Err(null("in_r"));
        }
        let policy = if allow_foreign_char {
            hfl_core::construct::CharPolicy::Any
        } else {
            hfl_core::construct::CharPolicy::Matching
        };
        let rel = Relation::with_policy(&p.0, &f.0, policy).map_err(fail)?;
        let set = PointSet::from_raw(&f.0, pts.to_vec(), true).map_err(fail)?;
        let e = rel.evaluate(&set).map_err(fail)?;
        // SAFETY: `in_r` checked; `degenerate` written only when non-null.
        unsafe {
            *in_r = e.in_r;
            if !degenerate.is_null() {
                *degenerate = e.degenerate;
            }
        }
        Ok(())
    })
}

/// Number of distinct roots in the field of the polynomial with `len`
/// coefficients (low degree first).
///
/// # Safety
/// `field` must be live; `coeffs` must hold `len` values; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hfl_count_roots(
    field: *const HflField,
    coeffs: *const u64,
    len: usize,
    out: *mut usize,
) -> HflStatus {
    guard(|| {
        // SAFETY: caller contract.
        let f = unsafe { handle(field, "field")? };
        let c = unsafe { slice(coeffs, len, "coeffs")? };
        if out.is_null() {
            return Err(null("out"));
        }
        let elems = c.iter().map(|&v| f.0.elem(v)).collect::<Result<Vec<_>, _>>().map_err(fail)?;
        let count = Poly::from_elems(&f.0, &elems).map_err(fail)?.count_roots().map_err(fail)?;
        // SAFETY: checked non-null.
        unsafe { *out = count };
        Ok(())
    })
}

/// Exhaustive check that `S(a, X)` determines every `(n−1)`-subset `a`.
///
/// # Safety
/// `field` must be live; `injective` and `subsets` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hfl_symcheck(
    field: *const HflField,
    n: usize,
    injective: *mut bool,
    subsets: *mut u64,
) -> HflStatus {
    guard(|| {
        // SAFETY: caller contract.
        let f = unsafe { handle(field, "field")? };
        if injective.is_null() || subsets.is_null() {
            return Err(null("output pointer"));
        }
        let check = sim_injectivity(&f.0, n).map_err(fail)?;
        // SAFETY: checked non-null.
        unsafe {
            *injective = check.injective;
            *subsets = check.subsets;
        }
        Ok(())
    })
}
