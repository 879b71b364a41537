//! C ABI over the exact engine.
//!
//! Handles are opaque and owned by the caller: every `*_new`, `*_parse` or
//! operation result must be released with the matching `*_free`. Functions
//! return a [`PmStatus`]; on failure `pm_last_error()` describes the cause
//! for the calling thread. Output pointers are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use postlie_magnus::cli::serialize::{element_from_json, element_to_json, element_to_text};
use postlie_magnus::{Algebra, AlgebraError, Element, Mode};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidOrder = 2,
    InvalidUtf8 = 3,
    Parse = 4,
    ModeMismatch = 5,
    /// Input outside the domain of the series (wrong counit, not primitive).
    Domain = 6,
    Internal = 7,
    InvalidArgument = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmMode {
    PostLie = 0,
    PreLie = 1,
}

fn mode_arg(mode: u32) -> Option<Mode> {
    match mode {
        m if m == PmMode::PostLie as u32 => Some(Mode::PostLie),
        m if m == PmMode::PreLie as u32 => Some(Mode::PreLie),
        _ => None,
    }
}

/// Truncated algebra context.
pub struct PmAlgebra(Algebra);

/// Element of a truncated algebra.
pub struct PmElement(Element);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: PmStatus, msg: impl Into<String>) -> PmStatus {
    set_error(msg);
    status
}

fn algebra_status(e: &AlgebraError) -> PmStatus {
    match e {
        AlgebraError::Order(_) => PmStatus::InvalidOrder,
        AlgebraError::Parse { .. } | AlgebraError::Tree(_) | AlgebraError::Exact(_) => {
            PmStatus::Parse
        }
        AlgebraError::WrongMode { .. } => PmStatus::ModeMismatch,
        AlgebraError::Augmentation { .. } | AlgebraError::NotPrimitive(_) => PmStatus::Domain,
    }
}

/// Runs `f`, turning panics into `Internal`.
fn guard(f: impl FnOnce() -> PmStatus) -> PmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "internal error".into());
            fail(PmStatus::Internal, msg)
        }
    }
}

unsafe fn text_arg<'a>(s: *const c_char) -> Result<&'a str, PmStatus> {
    if s.is_null() {
        return Err(fail(PmStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(PmStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

unsafe fn element_arg<'a>(alg: &PmAlgebra, e: *const PmElement) -> Result<&'a Element, PmStatus> {
    let Some(e) = e.as_ref() else {
        return Err(fail(PmStatus::NullPointer, "null element"));
    };
    if e.0.mode() != alg.0.mode() {
        return Err(fail(
            PmStatus::ModeMismatch,
            format!(
                "element is {} but the algebra is {}",
                e.0.mode().as_str(),
                alg.0.mode().as_str()
            ),
        ));
    }
    Ok(&e.0)
}

unsafe fn emit_element(out: *mut *mut PmElement, e: Element) -> PmStatus {
    *out = Box::into_raw(Box::new(PmElement(e)));
    PmStatus::Ok
}

unsafe fn emit_string(out: *mut *mut c_char, s: String) -> PmStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            PmStatus::Ok
        }
        Err(_) => fail(PmStatus::Internal, "output contains a NUL byte"),
    }
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn pm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static description of a `PmStatus` value.
#[no_mangle]
pub extern "C" fn pm_status_str(status: i32) -> *const c_char {
    let s: &'static CStr = match status {
        0 => c"ok",
        1 => c"null pointer",
        2 => c"invalid truncation order",
        3 => c"invalid UTF-8",
        4 => c"parse error",
        5 => c"mode mismatch",
        6 => c"input outside the series domain",
        7 => c"internal error",
        8 => c"invalid argument",
        _ => c"unknown status",
    };
    s.as_ptr()
}

/// Creates an algebra with truncation order `order` (1..=9); `mode` is a
/// `PmMode` value.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn pm_algebra_new(
    mode: u32,
    order: u32,
    out: *mut *mut PmAlgebra,
) -> PmStatus {
    guard(|| {
        if out.is_null() {
            return fail(PmStatus::NullPointer, "null output pointer");
        }
        let Some(mode) = mode_arg(mode) else {
            return fail(PmStatus::InvalidArgument, format!("unknown mode {mode}"));
        };
        match Algebra::new(mode, order as usize) {
            Ok(a) => {
                *out = Box::into_raw(Box::new(PmAlgebra(a)));
                PmStatus::Ok
            }
            Err(e) => fail(algebra_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `alg` must be NULL or a handle from `pm_algebra_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pm_algebra_free(alg: *mut PmAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Parses text such as `"[] [[]] - 1/2*[[[]]]"` into an element of `alg`.
///
/// # Safety
/// `alg` must be a live handle, `text` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn pm_element_parse(
    alg: *const PmAlgebra,
    text: *const c_char,
    out: *mut *mut PmElement,
) -> PmStatus {
    guard(|| {
        let (Some(alg), false) = (alg.as_ref(), out.is_null()) else {
            return fail(PmStatus::NullPointer, "null algebra or output pointer");
        };
        let text = match text_arg(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match alg.0.parse_element(text) {
            Ok(e) => emit_element(out, e),
            Err(e) => fail(algebra_status(&e), e.to_string()),
        }
    })
}

/// Reads an element from its JSON document. The document's mode must match
/// `alg`; its order is capped at the algebra's order.
///
/// # Safety
/// As for `pm_element_parse`.
#[no_mangle]
pub unsafe extern "C" fn pm_element_from_json(
    alg: *const PmAlgebra,
    json: *const c_char,
    out: *mut *mut PmElement,
) -> PmStatus {
    guard(|| {
        let (Some(alg), false) = (alg.as_ref(), out.is_null()) else {
            return fail(PmStatus::NullPointer, "null algebra or output pointer");
        };
        let json = match text_arg(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let e = match element_from_json(json) {
            Ok(e) => e,
            Err(e) => return fail(PmStatus::Parse, e.to_string()),
        };
        if e.mode() != alg.0.mode() {
            return fail(
                PmStatus::ModeMismatch,
                "document mode differs from the algebra",
            );
        }
        emit_element(out, alg.0.project(&e))
    })
}

/// # Safety
/// `e` must be NULL or a live element handle.
#[no_mangle]
pub unsafe extern "C" fn pm_element_free(e: *mut PmElement) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// 1 if the two elements are equal, 0 otherwise (including NULL input).
///
/// # Safety
/// Non-null arguments must be live element handles.
#[no_mangle]
pub unsafe extern "C" fn pm_element_equal(a: *const PmElement, b: *const PmElement) -> i32 {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => i32::from(a.0 == b.0),
        _ => 0,
    }
}

/// Number of nonzero terms.
///
/// # Safety
/// `e` must be NULL or a live element handle.
#[no_mangle]
pub unsafe extern "C" fn pm_element_len(e: *const PmElement) -> usize {
    e.as_ref().map_or(0, |e| e.0.len())
}

type Binary = fn(&Algebra, &Element, &Element) -> Result<Element, AlgebraError>;
type Unary = fn(&Algebra, &Element) -> Result<Element, AlgebraError>;

unsafe fn binary(
    alg: *const PmAlgebra,
    a: *const PmElement,
    b: *const PmElement,
    out: *mut *mut PmElement,
    op: Binary,
) -> PmStatus {
    guard(|| {
        let (Some(alg), false) = (alg.as_ref(), out.is_null()) else {
            return fail(PmStatus::NullPointer, "null algebra or output pointer");
        };
        let (a, b) = match (element_arg(alg, a), element_arg(alg, b)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match op(&alg.0, a, b) {
            Ok(e) => emit_element(out, e),
            Err(e) => fail(algebra_status(&e), e.to_string()),
        }
    })
}

unsafe fn unary(
    alg: *const PmAlgebra,
    x: *const PmElement,
    out: *mut *mut PmElement,
    op: Unary,
) -> PmStatus {
    guard(|| {
        let (Some(alg), false) = (alg.as_ref(), out.is_null()) else {
            return fail(PmStatus::NullPointer, "null algebra or output pointer");
        };
        let x = match element_arg(alg, x) {
            Ok(x) => x,
            Err(s) => return s,
        };
        match op(&alg.0, x) {
            Ok(e) => emit_element(out, e),
            Err(e) => fail(algebra_status(&e), e.to_string()),
        }
    })
}

/// Grossman–Larson product `a ∗ b`.
///
/// # Safety
/// `alg`, `a`, `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pm_gl_mul(
    alg: *const PmAlgebra,
    a: *const PmElement,
    b: *const PmElement,
    out: *mut *mut PmElement,
) -> PmStatus {
    binary(alg, a, b, out, |g, a, b| Ok(g.gl_mul(a, b)))
}

/// Concatenation product.
///
/// # Safety
/// As for `pm_gl_mul`.
#[no_mangle]
pub unsafe extern "C" fn pm_concat_mul(
    alg: *const PmAlgebra,
    a: *const PmElement,
    b: *const PmElement,
    out: *mut *mut PmElement,
) -> PmStatus {
    binary(alg, a, b, out, |g, a, b| Ok(g.concat_mul(a, b)))
}

/// BCH product for concatenation, `log(exp a · exp b)`.
///
/// # Safety
/// As for `pm_gl_mul`.
#[no_mangle]
pub unsafe extern "C" fn pm_bch_h(
    alg: *const PmAlgebra,
    a: *const PmElement,
    b: *const PmElement,
    out: *mut *mut PmElement,
) -> PmStatus {
    binary(alg, a, b, out, Algebra::bch_h)
}

/// BCH product for the Grossman–Larson product.
///
/// # Safety
/// As for `pm_gl_mul`.
#[no_mangle]
pub unsafe extern "C" fn pm_bch_g(
    alg: *const PmAlgebra,
    a: *const PmElement,
    b: *const PmElement,
    out: *mut *mut PmElement,
) -> PmStatus {
    binary(alg, a, b, out, Algebra::bch_g)
}

/// Post-Lie Magnus expansion χ(x) of a primitive `x`.
///
/// # Safety
/// `alg`, `x` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pm_chi(
    alg: *const PmAlgebra,
    x: *const PmElement,
    out: *mut *mut PmElement,
) -> PmStatus {
    unary(alg, x, out, Algebra::post_lie_magnus)
}

/// Inverse Φ of the post-Lie Magnus expansion.
///
/// # Safety
/// As for `pm_chi`.
#[no_mangle]
pub unsafe extern "C" fn pm_phi(
    alg: *const PmAlgebra,
    x: *const PmElement,
    out: *mut *mut PmElement,
) -> PmStatus {
    unary(alg, x, out, Algebra::inverse_magnus)
}

/// The isomorphism Θ from concatenation words to Grossman–Larson products.
///
/// # Safety
/// As for `pm_chi`.
#[no_mangle]
pub unsafe extern "C" fn pm_theta(
    alg: *const PmAlgebra,
    x: *const PmElement,
    out: *mut *mut PmElement,
) -> PmStatus {
    unary(alg, x, out, |g, x| Ok(g.theta(x)))
}

/// Inverse of Θ.
///
/// # Safety
/// As for `pm_chi`.
#[no_mangle]
pub unsafe extern "C" fn pm_theta_inverse(
    alg: *const PmAlgebra,
    x: *const PmElement,
    out: *mut *mut PmElement,
) -> PmStatus {
    unary(alg, x, out, |g, x| Ok(g.theta_inverse(x)))
}

/// Text form, one `coefficient<TAB>word` line per term. Free the result
/// with `pm_string_free`.
///
/// # Safety
/// `e` must be a live element handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pm_element_to_text(
    e: *const PmElement,
    out: *mut *mut c_char,
) -> PmStatus {
    guard(|| match (e.as_ref(), out.is_null()) {
        (Some(e), false) => emit_string(out, element_to_text(&e.0)),
        _ => fail(PmStatus::NullPointer, "null element or output pointer"),
    })
}

/// Versioned JSON document. Free the result with `pm_string_free`.
///
/// # Safety
/// As for `pm_element_to_text`.
#[no_mangle]
pub unsafe extern "C" fn pm_element_to_json(
    e: *const PmElement,
    out: *mut *mut c_char,
) -> PmStatus {
    guard(|| match (e.as_ref(), out.is_null()) {
        (Some(e), false) => emit_string(out, element_to_json(&e.0)),
        _ => fail(PmStatus::NullPointer, "null element or output pointer"),
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn pm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
