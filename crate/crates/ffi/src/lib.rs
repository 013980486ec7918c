//! C ABI over `cyclic-hw`.
//!
//! Objects cross the boundary as opaque handles that the caller frees with the
//! matching `*_free`. Every fallible call returns a [`CyclicHwStatus`]; on
//! failure `cyclic_hw_last_error_message` describes the error for the current
//! thread. Strings handed out by the library are released with
//! `cyclic_hw_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cyclic_hw::ff::{PrimeField, UniPoly};
use cyclic_hw::hassewitt::{phi_specialized_at, psi_specialized_at};
use cyclic_hw::monodromy::Datum;
use cyclic_hw::{strata, Error};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CyclicHwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    HypothesisNotMet = 4,
    BudgetExceeded = 5,
    IndexOutOfRange = 6,
    BufferTooSmall = 7,
    Internal = 8,
}

/// A validated monodromy datum.
pub struct CyclicHwDatum {
    inner: Datum,
}

/// A polynomial in one variable over a prime field.
pub struct CyclicHwPoly {
    inner: UniPoly,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CyclicHwStatus {
    match e {
        Error::HypothesisNotMet(_)
        | Error::PsiHypothesisNotMet(_)
        | Error::WrongCongruenceClass(..)
        | Error::UnsupportedFamily(_) => CyclicHwStatus::HypothesisNotMet,
        Error::DegreeBudgetExceeded { .. } => CyclicHwStatus::BudgetExceeded,
        Error::IndexOutOfRange(_) => CyclicHwStatus::IndexOutOfRange,
        Error::Io(_) => CyclicHwStatus::Internal,
        _ => CyclicHwStatus::InvalidInput,
    }
}

fn fail(status: CyclicHwStatus, msg: String) -> CyclicHwStatus {
    set_error(msg);
    status
}

/// Runs `f`, converting library errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), CyclicHwStatus>>(f: F) -> CyclicHwStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CyclicHwStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(CyclicHwStatus::Internal, "panic inside cyclic-hw".into()),
    }
}

fn lib<T>(r: cyclic_hw::Result<T>) -> Result<T, CyclicHwStatus> {
    r.map_err(|e| fail(status_of(&e), format!("{}: {e}", e.code())))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, CyclicHwStatus> {
    if s.is_null() {
        return Err(fail(CyclicHwStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(CyclicHwStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn handle<'a, T>(h: *const T) -> Result<&'a T, CyclicHwStatus> {
    h.as_ref().ok_or_else(|| fail(CyclicHwStatus::NullPointer, "null handle".into()))
}

fn out_ptr<T>(out: *mut T) -> Result<(), CyclicHwStatus> {
    if out.is_null() {
        Err(fail(CyclicHwStatus::NullPointer, "null output pointer".into()))
    } else {
        Ok(())
    }
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Message for the last failed call on this thread, or NULL. Owned by the library;
/// valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn cyclic_hw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cyclic_hw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `m:r:a1,...,ar` (or the JSON form) into a new datum handle.
///
/// # Safety
/// `text` must be a NUL terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cyclic_hw_datum_parse(text: *const c_char, out: *mut *mut CyclicHwDatum) -> CyclicHwStatus {
    guard(|| {
        out_ptr(out)?;
        let s = read_str(text)?;
        let d: Datum = lib(s.parse())?;
        *out = Box::into_raw(Box::new(CyclicHwDatum { inner: d }));
        Ok(())
    })
}

/// # Safety
/// `d` must come from `cyclic_hw_datum_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cyclic_hw_datum_free(d: *mut CyclicHwDatum) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `d` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cyclic_hw_datum_genus(d: *const CyclicHwDatum, out: *mut u64) -> CyclicHwStatus {
    guard(|| {
        out_ptr(out)?;
        *out = handle(d)?.inner.genus();
        Ok(())
    })
}

/// Writes the signature values into `buf`. `needed` always receives the full
/// length; with `cap` too small the call returns `BUFFER_TOO_SMALL`.
///
/// # Safety
/// `buf` must hold `cap` values (it may be NULL when `cap` is 0).
#[no_mangle]
pub unsafe extern "C" fn cyclic_hw_datum_signature(
    d: *const CyclicHwDatum,
    buf: *mut u64,
    cap: usize,
    needed: *mut usize,
) -> CyclicHwStatus {
    guard(|| {
        out_ptr(needed)?;
        let sig = handle(d)?.inner.signature();
        let v = sig.values();
        *needed = v.len();
        if cap < v.len() {
            return Err(fail(CyclicHwStatus::BufferTooSmall, format!("need {} slots", v.len())));
        }
        out_ptr(buf)?;
        ptr::copy_nonoverlapping(v.as_ptr(), buf, v.len());
        Ok(())
    })
}

unsafe fn specialized(
    d: *const CyclicHwDatum,
    p: u64,
    tau: u64,
    jp: usize,
    j: usize,
    out: *mut *mut CyclicHwPoly,
    psi: bool,
) -> CyclicHwStatus {
    guard(|| {
        out_ptr(out)?;
        let d = &handle(d)?.inner;
        let field = lib(PrimeField::new(p))?;
        let f = if psi { psi_specialized_at(d, field, tau, jp, j) } else { phi_specialized_at(d, field, tau, jp, j) };
        *out = Box::into_raw(Box::new(CyclicHwPoly { inner: lib(f)? }));
        Ok(())
    })
}

/// The entry `phi_tau(j', j)` specialized to the line `(inf, t, 1, 0)`; `r` must be 4.
///
/// # Safety
/// `d` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cyclic_hw_phi_specialized(
    d: *const CyclicHwDatum,
    p: u64,
    tau: u64,
    jp: usize,
    j: usize,
    out: *mut *mut CyclicHwPoly,
) -> CyclicHwStatus {
    specialized(d, p, tau, jp, j, out, false)
}

/// Same as `cyclic_hw_phi_specialized` for `psi_tau(j', j)`.
///
/// # Safety
/// `d` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cyclic_hw_psi_specialized(
    d: *const CyclicHwDatum,
    p: u64,
    tau: u64,
    jp: usize,
    j: usize,
    out: *mut *mut CyclicHwPoly,
) -> CyclicHwStatus {
    specialized(d, p, tau, jp, j, out, true)
}

/// # Safety
/// `f` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cyclic_hw_poly_free(f: *mut CyclicHwPoly) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Degree, or -1 for the zero polynomial.
///
/// # Safety
/// `f` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cyclic_hw_poly_degree(f: *const CyclicHwPoly, out: *mut i64) -> CyclicHwStatus {
    guard(|| {
        out_ptr(out)?;
        *out = handle(f)?.inner.degree().map_or(-1, |d| d as i64);
        Ok(())
    })
}

/// Coefficients, constant term first, in `[0, p)`. Same buffer protocol as
/// `cyclic_hw_datum_signature`.
///
/// # Safety
/// `buf` must hold `cap` values (it may be NULL when `cap` is 0).
#[no_mangle]
pub unsafe extern "C" fn cyclic_hw_poly_coeffs(
    f: *const CyclicHwPoly,
    buf: *mut u64,
    cap: usize,
    needed: *mut usize,
) -> CyclicHwStatus {
    guard(|| {
        out_ptr(needed)?;
        let c = handle(f)?.inner.coeffs();
        *needed = c.len();
        if cap < c.len() {
            return Err(fail(CyclicHwStatus::BufferTooSmall, format!("need {} slots", c.len())));
        }
        if !c.is_empty() {
            out_ptr(buf)?;
            ptr::copy_nonoverlapping(c.as_ptr(), buf, c.len());
        }
        Ok(())
    })
}

/// Text form such as `3 + 3*t`. Free with `cyclic_hw_string_free`.
///
/// # Safety
/// `f` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cyclic_hw_poly_to_string(f: *const CyclicHwPoly, out: *mut *mut c_char) -> CyclicHwStatus {
    guard(|| {
        out_ptr(out)?;
        *out = to_c_string(handle(f)?.inner.to_text());
        Ok(())
    })
}

/// Stratum census at `p` as a JSON object. Free with `cyclic_hw_string_free`.
///
/// # Safety
/// `d` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cyclic_hw_census_json(d: *const CyclicHwDatum, p: u64, out: *mut *mut c_char) -> CyclicHwStatus {
    guard(|| {
        out_ptr(out)?;
        let rec = lib(strata::census(&handle(d)?.inner, p))?;
        let json = serde_json::to_string(&rec).map_err(|e| fail(CyclicHwStatus::Internal, e.to_string()))?;
        *out = to_c_string(json);
        Ok(())
    })
}
