//! C ABI over `bergman-core`.
//!
//! Domains are opaque handles created by the `bergman_domain_*` constructors
//! and released with [`bergman_domain_free`]. Every call returns a
//! [`BergmanStatus`]; on failure [`bergman_last_error_message`] describes the
//! error for the calling thread. Strings handed out by the library must be
//! released with [`bergman_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bergman_core::cli::{run, RunConfig};
use bergman_core::diastasis::bergman_diastasis as diastasis;
use bergman_core::exact::{rat, Rational};
use bergman_core::kernels::{kernel_for, BergmanKernel, DomainSpec};
use bergman_core::rigidity::rigidity_report;
use bergman_core::Error;
use num_complex::Complex64;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BergmanStatus {
    Ok = 0,
    NullPointer = 1,
    ParameterOutOfRange = 2,
    OutsideDomain = 3,
    NonInvertible = 4,
    SeriesDivergence = 5,
    LuQiKengZero = 6,
    OrthogonalPair = 7,
    Quadrature = 8,
    TailEstimate = 9,
    Inconsistent = 10,
    OutsideScope = 11,
    Schema = 12,
    Io = 13,
    InvalidUtf8 = 14,
    Panic = 15,
}

impl From<&Error> for BergmanStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::ParameterOutOfRange(_) => BergmanStatus::ParameterOutOfRange,
            Error::OutsideDomain(_) => BergmanStatus::OutsideDomain,
            Error::NonInvertible(_) => BergmanStatus::NonInvertible,
            Error::SeriesDivergence { .. } => BergmanStatus::SeriesDivergence,
            Error::LuQiKengZero => BergmanStatus::LuQiKengZero,
            Error::OrthogonalPair => BergmanStatus::OrthogonalPair,
            Error::Quadrature(_) => BergmanStatus::Quadrature,
            Error::TailEstimate(_) => BergmanStatus::TailEstimate,
            Error::Inconsistent(_) => BergmanStatus::Inconsistent,
            Error::OutsideScope(_) => BergmanStatus::OutsideScope,
            Error::Schema(_) => BergmanStatus::Schema,
            Error::Io(_) => BergmanStatus::Io,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BergmanComplex {
    pub re: f64,
    pub im: f64,
}

impl From<BergmanComplex> for Complex64 {
    fn from(c: BergmanComplex) -> Self {
        Complex64::new(c.re, c.im)
    }
}

/// Opaque domain handle.
pub struct BergmanDomain {
    spec: DomainSpec,
    kernel: Box<dyn BergmanKernel + Send + Sync>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

struct Failure(BergmanStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(BergmanStatus::from(&e), format!("{}: {e}", e.code()))
    }
}

fn null(what: &str) -> Failure {
    Failure(BergmanStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> BergmanStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => BergmanStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            BergmanStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(BergmanStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn read_point(p: *const BergmanComplex, len: usize, what: &str) -> Result<Vec<Complex64>, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len).iter().map(|c| Complex64::from(*c)).collect())
}

fn ratio(num: i64, den: i64, what: &str) -> Result<Rational, Failure> {
    if den == 0 {
        return Err(Failure(BergmanStatus::ParameterOutOfRange, format!("{what} has zero denominator")));
    }
    Ok(rat(num, den))
}

fn into_c_string(text: String) -> Result<*mut c_char, Failure> {
    CString::new(text)
        .map(CString::into_raw)
        .map_err(|_| Failure(BergmanStatus::Io, "output contains a NUL byte".into()))
}

unsafe fn install(spec: DomainSpec, out: *mut *mut BergmanDomain) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    spec.validate()?;
    let kernel = kernel_for(&spec)?;
    *out = Box::into_raw(Box::new(BergmanDomain { spec, kernel }));
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Valid until the next call.
#[no_mangle]
pub extern "C" fn bergman_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Stable name of a status code, e.g. `"E_OUTSIDE_DOMAIN"`. Static storage.
#[no_mangle]
pub extern "C" fn bergman_status_name(status: BergmanStatus) -> *const c_char {
    let name: &'static CStr = match status {
        BergmanStatus::Ok => c"OK",
        BergmanStatus::NullPointer => c"E_NULL",
        BergmanStatus::ParameterOutOfRange => c"E_PARAM_RANGE",
        BergmanStatus::OutsideDomain => c"E_OUTSIDE_DOMAIN",
        BergmanStatus::NonInvertible => c"E_NON_INVERTIBLE",
        BergmanStatus::SeriesDivergence => c"E_SERIES_DIVERGENCE",
        BergmanStatus::LuQiKengZero => c"E_LU_QI_KENG",
        BergmanStatus::OrthogonalPair => c"E_ORTHOGONAL",
        BergmanStatus::Quadrature => c"E_QUADRATURE",
        BergmanStatus::TailEstimate => c"E_TAIL",
        BergmanStatus::Inconsistent => c"E_INCONSISTENT",
        BergmanStatus::OutsideScope => c"E_SCOPE",
        BergmanStatus::Schema => c"E_SCHEMA",
        BergmanStatus::Io => c"E_IO",
        BergmanStatus::InvalidUtf8 => c"E_UTF8",
        BergmanStatus::Panic => c"E_PANIC",
    };
    name.as_ptr()
}

/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn bergman_domain_ball(n: u32, out: *mut *mut BergmanDomain) -> BergmanStatus {
    guard(|| install(DomainSpec::ball(n), out))
}

/// Hartogs domain with fiber dimension `m` and exponent `s = s_num/s_den`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn bergman_domain_hartogs(
    n: u32,
    m: u32,
    s_num: i64,
    s_den: i64,
    out: *mut *mut BergmanDomain,
) -> BergmanStatus {
    guard(|| install(DomainSpec::hartogs(n, m, ratio(s_num, s_den, "s")?), out))
}

/// Egg domain with block dimensions `p`, `q` and exponent `k = k_num/k_den`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn bergman_domain_egg(
    n: u32,
    p: u32,
    q: u32,
    k_num: i64,
    k_den: i64,
    out: *mut *mut BergmanDomain,
) -> BergmanStatus {
    guard(|| install(DomainSpec::egg(n, p, q, ratio(k_num, k_den, "k")?), out))
}

/// Domain from its JSON description, e.g. `{"domain":{"kind":"ball","n":2}}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bergman_domain_from_json(json: *const c_char, out: *mut *mut BergmanDomain) -> BergmanStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let spec: DomainSpec = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        install(spec, out)
    })
}

/// # Safety
/// `domain` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bergman_domain_free(domain: *mut BergmanDomain) {
    if !domain.is_null() {
        drop(Box::from_raw(domain));
    }
}

/// # Safety
/// `domain` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bergman_domain_dim(domain: *const BergmanDomain, out: *mut usize) -> BergmanStatus {
    guard(|| {
        let d = domain.as_ref().ok_or_else(|| null("domain"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = d.kernel.dim();
        Ok(())
    })
}

/// `K(z, w)`; both points have `len` coordinates.
///
/// # Safety
/// `z` and `w` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bergman_kernel(
    domain: *const BergmanDomain,
    z: *const BergmanComplex,
    w: *const BergmanComplex,
    len: usize,
    out: *mut BergmanComplex,
) -> BergmanStatus {
    guard(|| {
        let d = domain.as_ref().ok_or_else(|| null("domain"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let value = d.kernel.kernel(&read_point(z, len, "z")?, &read_point(w, len, "w")?)?;
        *out = BergmanComplex { re: value.re, im: value.im };
        Ok(())
    })
}

/// Diastasis of the Bergman metric between `z` and `w`.
///
/// # Safety
/// `z` and `w` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bergman_diastasis(
    domain: *const BergmanDomain,
    z: *const BergmanComplex,
    w: *const BergmanComplex,
    len: usize,
    out: *mut f64,
) -> BergmanStatus {
    guard(|| {
        let d = domain.as_ref().ok_or_else(|| null("domain"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = diastasis(d.kernel.as_ref(), &read_point(z, len, "z")?, &read_point(w, len, "w")?)?;
        Ok(())
    })
}

/// Rigidity report as JSON for the target dimension `big_n` and scale
/// `lambda = lambda_num/lambda_den`. Release `*out` with [`bergman_string_free`].
///
/// # Safety
/// `domain` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bergman_rigidity_report_json(
    domain: *const BergmanDomain,
    big_n: u32,
    lambda_num: i64,
    lambda_den: i64,
    truncation: u32,
    out: *mut *mut c_char,
) -> BergmanStatus {
    guard(|| {
        let d = domain.as_ref().ok_or_else(|| null("domain"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = d.spec.clone().with_target(big_n, ratio(lambda_num, lambda_den, "lambda")?);
        let report = rigidity_report(&spec, truncation)?;
        let text = serde_json::to_string(&report).map_err(|e| Error::Io(e.to_string()))?;
        *out = into_c_string(text)?;
        Ok(())
    })
}

/// Runs a full command configuration (the JSON accepted by `bergman run`)
/// and returns the report text; `exit_code` receives the command's exit status.
///
/// # Safety
/// `config_json` must be NUL-terminated; `out` and `exit_code` writable.
#[no_mangle]
pub unsafe extern "C" fn bergman_run_json(
    config_json: *const c_char,
    out: *mut *mut c_char,
    exit_code: *mut i32,
) -> BergmanStatus {
    guard(|| {
        let config = RunConfig::from_json(read_str(config_json, "config_json")?)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let code = exit_code.as_mut().ok_or_else(|| null("exit_code"))?;
        let outcome = run(&config)?;
        *out = into_c_string(outcome.render(config.format)?)?;
        *code = outcome.exit_code;
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bergman_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
