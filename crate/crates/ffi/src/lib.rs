//! C ABI over `metacsp`.
//!
//! Objects cross the boundary as opaque heap handles released with the
//! matching `*_free`. Every fallible call returns a [`MetacspStatus`]; on a
//! non-OK status the message is available from [`metacsp_last_error`] on the
//! same thread until the next failing call. Strings returned by the library
//! are owned by the caller and released with [`metacsp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use metacsp::decompose::{check_certificate, decompose, DecompositionCertificate};
use metacsp::ideal::in_h;
use metacsp::magnus::{is_identity, parse_word};
use metacsp::matrix::{build_matrix, check_ia, parse_matrix, IAMatrix};
use metacsp::laurent::parse_poly;
use metacsp::{Error, LaurentPoly};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetacspStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    NotIa = 5,
    NotInvertible = 6,
    NotMember = 7,
    Precondition = 8,
    Verification = 9,
    Corrupt = 10,
    Io = 11,
    Panic = 12,
}

/// A Laurent polynomial.
pub struct MetacspPoly(LaurentPoly);

/// An IA matrix.
pub struct MetacspMatrix(IAMatrix);

/// A decomposition certificate.
pub struct MetacspCertificate(DecompositionCertificate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> MetacspStatus {
    match e {
        Error::Parse { .. } => MetacspStatus::Parse,
        Error::ContextMismatch { .. } | Error::IndexOutOfRange { .. } | Error::InvalidArgument(_) => {
            MetacspStatus::InvalidArgument
        }
        Error::NotIa(_) => MetacspStatus::NotIa,
        Error::NotInvertible(_) => MetacspStatus::NotInvertible,
        Error::NotMember(_) => MetacspStatus::NotMember,
        Error::Precondition(_) => MetacspStatus::Precondition,
        Error::MalformedWitness(_) | Error::Verification(_) => MetacspStatus::Verification,
        Error::Corrupt(_) => MetacspStatus::Corrupt,
        Error::Io(_) => MetacspStatus::Io,
    }
}

enum Fail {
    Status(MetacspStatus, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MetacspStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MetacspStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            MetacspStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(MetacspStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Status(MetacspStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn obj<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_value<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = value;
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message of the last failure on this thread, or NULL. Borrowed; do not free.
#[no_mangle]
pub extern "C" fn metacsp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn metacsp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a polynomial in `x1..xn`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn metacsp_poly_parse(n: usize, text_: *const c_char, out: *mut *mut MetacspPoly) -> MetacspStatus {
    guard(|| {
        let p = parse_poly(n, text(text_, "text")?)?;
        put(out, MetacspPoly(p))
    })
}

/// Product of two polynomials in the same ring.
///
/// # Safety
/// Handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn metacsp_poly_mul(
    a: *const MetacspPoly,
    b: *const MetacspPoly,
    out: *mut *mut MetacspPoly,
) -> MetacspStatus {
    guard(|| {
        let (a, b) = (obj(a, "a")?, obj(b, "b")?);
        put(out, MetacspPoly(a.0.checked_mul(&b.0)?))
    })
}

/// Whether `p` lies in `H_{n,m}`.
///
/// # Safety
/// `p` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn metacsp_poly_in_h(p: *const MetacspPoly, m: u64, out: *mut bool) -> MetacspStatus {
    guard(|| {
        let p = obj(p, "poly")?;
        if m == 0 {
            return Err(Fail::Status(MetacspStatus::InvalidArgument, "modulus must be positive".into()));
        }
        put_value(out, in_h(&p.0, m))
    })
}

/// Canonical text of `p`; free with [`metacsp_string_free`]. NULL on a null handle.
///
/// # Safety
/// `p` must be live or NULL.
#[no_mangle]
pub unsafe extern "C" fn metacsp_poly_to_string(p: *const MetacspPoly) -> *mut c_char {
    p.as_ref().map_or(ptr::null_mut(), |p| owned_string(p.0.to_string()))
}

/// # Safety
/// `p` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn metacsp_poly_free(p: *mut MetacspPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Whether the word is trivial in the free metabelian group of rank `n`.
///
/// # Safety
/// `word` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn metacsp_word_is_identity(n: usize, word: *const c_char, out: *mut bool) -> MetacspStatus {
    guard(|| {
        let w = parse_word(n, text(word, "word")?)?;
        put_value(out, is_identity(&w))
    })
}

/// Builds a matrix from a builder expression such as `pow(elem(1,2),16)`.
///
/// # Safety
/// `expr` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn metacsp_matrix_build(n: usize, expr: *const c_char, out: *mut *mut MetacspMatrix) -> MetacspStatus {
    guard(|| {
        let m = build_matrix(n, text(expr, "expr")?)?;
        put(out, MetacspMatrix(m))
    })
}

/// Parses the matrix text format (one comma-separated row per line).
///
/// # Safety
/// `text_` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn metacsp_matrix_parse(text_: *const c_char, out: *mut *mut MetacspMatrix) -> MetacspStatus {
    guard(|| {
        let m = parse_matrix(text(text_, "text")?)?;
        put(out, MetacspMatrix(m))
    })
}

/// Whether the matrix fixes the sigma vector and has a monomial determinant.
///
/// # Safety
/// `m` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn metacsp_matrix_is_ia(m: *const MetacspMatrix, out: *mut bool) -> MetacspStatus {
    guard(|| {
        let m = obj(m, "matrix")?;
        put_value(out, check_ia(&m.0))
    })
}

/// Size `n` of the matrix, 0 for NULL.
///
/// # Safety
/// `m` must be live or NULL.
#[no_mangle]
pub unsafe extern "C" fn metacsp_matrix_size(m: *const MetacspMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.n())
}

/// Entry `(i, j)`, 1-based, as a new polynomial handle.
///
/// # Safety
/// `m` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn metacsp_matrix_entry(
    m: *const MetacspMatrix,
    i: usize,
    j: usize,
    out: *mut *mut MetacspPoly,
) -> MetacspStatus {
    guard(|| {
        let m = obj(m, "matrix")?;
        let n = m.0.n();
        for k in [i, j] {
            if k == 0 || k > n {
                return Err(Error::IndexOutOfRange { index: k, n }.into());
            }
        }
        put(out, MetacspPoly(m.0.get(i, j).clone()))
    })
}

/// Matrix text, one row per line; free with [`metacsp_string_free`].
///
/// # Safety
/// `m` must be live or NULL.
#[no_mangle]
pub unsafe extern "C" fn metacsp_matrix_to_string(m: *const MetacspMatrix) -> *mut c_char {
    m.as_ref().map_or(ptr::null_mut(), |m| owned_string(m.0.to_string()))
}

/// # Safety
/// `m` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn metacsp_matrix_free(m: *mut MetacspMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Decomposes a member of `IG_{n,m^2}`, `n >= 4`, and self-checks the certificate.
///
/// # Safety
/// `alpha` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn metacsp_decompose(
    alpha: *const MetacspMatrix,
    m: u64,
    out: *mut *mut MetacspCertificate,
) -> MetacspStatus {
    guard(|| {
        let cert = decompose(&obj(alpha, "matrix")?.0, m)?;
        check_certificate(&cert).map_err(|f| Fail::Status(MetacspStatus::Verification, f.to_string()))?;
        put(out, MetacspCertificate(cert))
    })
}

/// Re-verifies a certificate from its contents. A failure is reported as
/// `METACSP_STATUS_VERIFICATION`; the offending factor index is written to
/// `bad_index` when it is non-NULL, or `SIZE_MAX` for a header failure.
///
/// # Safety
/// `cert` must be live; `bad_index` writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn metacsp_certificate_check(cert: *const MetacspCertificate, bad_index: *mut usize) -> MetacspStatus {
    guard(|| match check_certificate(&obj(cert, "certificate")?.0) {
        Ok(()) => Ok(()),
        Err(f) => {
            if !bad_index.is_null() {
                *bad_index = f.index.unwrap_or(usize::MAX);
            }
            Err(Fail::Status(MetacspStatus::Verification, f.to_string()))
        }
    })
}

/// Number of factors, 0 for NULL.
///
/// # Safety
/// `cert` must be live or NULL.
#[no_mangle]
pub unsafe extern "C" fn metacsp_certificate_factor_count(cert: *const MetacspCertificate) -> usize {
    cert.as_ref().map_or(0, |c| c.0.factors.len())
}

/// Product of the factors as a new matrix handle.
///
/// # Safety
/// `cert` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn metacsp_certificate_product(
    cert: *const MetacspCertificate,
    out: *mut *mut MetacspMatrix,
) -> MetacspStatus {
    guard(|| put(out, MetacspMatrix(obj(cert, "certificate")?.0.product())))
}

/// Certificate JSON; free with [`metacsp_string_free`].
///
/// # Safety
/// `cert` must be live or NULL.
#[no_mangle]
pub unsafe extern "C" fn metacsp_certificate_to_json(cert: *const MetacspCertificate) -> *mut c_char {
    cert.as_ref().map_or(ptr::null_mut(), |c| owned_string(c.0.to_json()))
}

/// Parses certificate JSON. The result is not checked; see [`metacsp_certificate_check`].
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn metacsp_certificate_from_json(
    json: *const c_char,
    out: *mut *mut MetacspCertificate,
) -> MetacspStatus {
    guard(|| {
        let c = DecompositionCertificate::from_json(text(json, "json")?)?;
        put(out, MetacspCertificate(c))
    })
}

/// # Safety
/// `cert` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn metacsp_certificate_free(cert: *mut MetacspCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}
