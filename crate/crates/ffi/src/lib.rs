//! C interface to `cyclotower`.
//!
//! Fields and classifications cross the boundary as opaque handles that must be released with
//! their `*_free` function. Fallible calls return a [`CtStatus`] and write results through out
//! pointers; on failure [`ct_last_error_message`] describes the error for the calling thread.
//! Strings returned by this library are owned by the caller and released with [`ct_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cyclotower::classifier::MAX_E;
use cyclotower::oracle::verify::verify;
use cyclotower::towers::enumerate_towers;
use cyclotower::{classify, BaseField, Error, Outcome, TauSign};

/// Largest `k` accepted by the membership and order queries.
pub const CT_MAX_LEVEL: u32 = 64;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Parse = 4,
    UnsupportedCharacteristic = 5,
    InvalidField = 6,
    OutOfScope = 7,
    SizeGuard = 8,
    NoRootOfUnity = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CtTauSign {
    Plus = 0,
    Minus = 1,
}

/// Invariants of a base field. `c2_witness` is 0 when the field lacks property C2.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CtInvariants {
    pub nu_plus: u32,
    pub nu: u32,
    pub has_c2: bool,
    pub c2_witness: u32,
    pub zeta4_in_field: bool,
    pub tau_plus_level: u32,
}

/// Opaque base field handle.
pub struct CtField(BaseField);

/// Opaque result of classifying `F(ζ_{2^e})/F`.
pub struct CtClassification(Outcome);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(err: &Error) -> CtStatus {
    match err {
        Error::InvalidArgument(_) => CtStatus::InvalidArgument,
        Error::UnsupportedCharacteristic(_) => CtStatus::UnsupportedCharacteristic,
        Error::InvalidField(_) => CtStatus::InvalidField,
        Error::Parse(_) => CtStatus::Parse,
        Error::OutOfScope { .. } => CtStatus::OutOfScope,
        Error::SizeGuard(_) => CtStatus::SizeGuard,
        Error::NoRootOfUnity { .. } => CtStatus::NoRootOfUnity,
    }
}

struct Failure(CtStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure(status_of(&err), err.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CtStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status and the thread's last error.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CtStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CtStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            CtStatus::Panic
        }
    }
}

unsafe fn field_ref<'a>(field: *const CtField) -> Result<&'a BaseField, Failure> {
    field.as_ref().map(|f| &f.0).ok_or_else(|| null("field"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string(value).map_err(|e| Failure(CtStatus::InvalidArgument, e.to_string()))
}

fn check_level(k: u32) -> Result<(), Failure> {
    if k > CT_MAX_LEVEL {
        return Err(Failure(CtStatus::InvalidArgument, format!("k = {k} exceeds {CT_MAX_LEVEL}")));
    }
    Ok(())
}

fn check_e(e: u32) -> Result<(), Failure> {
    if !(1..=MAX_E).contains(&e) {
        return Err(Failure(CtStatus::InvalidArgument, format!("e = {e} must lie in 1..={MAX_E}")));
    }
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ct_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy of the last error message on this thread, or null if the last call succeeded.
#[no_mangle]
pub extern "C" fn ct_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null_mut(), |m| m.clone().into_raw()))
}

/// # Safety
/// `s` must be null or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ct_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `fq:p`, `fq:p^k`, `qzeta:m` or `qsqrt:d`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_field_parse(text: *const c_char, out: *mut *mut CtField) -> CtStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text).to_str().map_err(|e| Failure(CtStatus::InvalidUtf8, e.to_string()))?;
        let field: BaseField = text.parse()?;
        write_out(out, Box::into_raw(Box::new(CtField(field))))
    })
}

/// # Safety
/// `field` must be null or a handle from [`ct_field_parse`] that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ct_field_free(field: *mut CtField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Canonical text of the field, e.g. `fq:3^2`. Null if `field` is null.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ct_field_to_string(field: *const CtField) -> *mut c_char {
    field.as_ref().map_or(ptr::null_mut(), |f| to_c_string(f.0.to_string()))
}

/// # Safety
/// `field` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_field_invariants(field: *const CtField, out: *mut CtInvariants) -> CtStatus {
    guard(|| {
        let inv = cyclotower::invariants::nu(field_ref(field)?);
        write_out(
            out,
            CtInvariants {
                nu_plus: inv.nu_plus,
                nu: inv.nu,
                has_c2: inv.has_c2,
                c2_witness: inv.c2_witness.unwrap_or(0),
                zeta4_in_field: inv.zeta4_in_field,
                tau_plus_level: inv.tau_plus_level,
            },
        )
    })
}

/// Whether `ζ_{2^k}` lies in the field, for `k <= CT_MAX_LEVEL`.
///
/// # Safety
/// `field` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_field_contains_zeta(field: *const CtField, k: u32, out: *mut bool) -> CtStatus {
    guard(|| {
        let f = field_ref(field)?;
        check_level(k)?;
        write_out(out, f.contains_zeta(k))
    })
}

/// Whether `ζ_{2^k} ± ζ_{2^k}⁻¹` lies in the field, for `k <= CT_MAX_LEVEL`.
///
/// # Safety
/// `field` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_field_contains_tau(
    field: *const CtField,
    k: u32,
    sign: CtTauSign,
    out: *mut bool,
) -> CtStatus {
    guard(|| {
        let f = field_ref(field)?;
        check_level(k)?;
        let sign = match sign {
            CtTauSign::Plus => TauSign::Plus,
            CtTauSign::Minus => TauSign::Minus,
        };
        write_out(out, f.contains_tau(k, sign))
    })
}

/// Order of `ζ_{2^k}` modulo the multiplicative group of the field.
///
/// # Safety
/// `field` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_field_order_over(field: *const CtField, k: u32, out: *mut u64) -> CtStatus {
    guard(|| {
        let f = field_ref(field)?;
        check_level(k)?;
        write_out(out, f.order_over(k))
    })
}

/// Classifies `F(ζ_{2^e})/F` for `1 <= e <= 20`.
///
/// # Safety
/// `field` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_classify(field: *const CtField, e: u32, out: *mut *mut CtClassification) -> CtStatus {
    guard(|| {
        let f = field_ref(field)?;
        check_e(e)?;
        let outcome = classify(f, e)?;
        write_out(out, Box::into_raw(Box::new(CtClassification(outcome))))
    })
}

/// # Safety
/// `c` must be null or a handle from [`ct_classify`] that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ct_classification_free(c: *mut CtClassification) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// `[F(ζ_{2^e}) : F]`, or 0 if `c` is null.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ct_classification_degree(c: *const CtClassification) -> u64 {
    c.as_ref().map_or(0, |c| c.0.degree())
}

/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ct_classification_is_cyclic(c: *const CtClassification) -> bool {
    c.as_ref().is_some_and(|c| c.0.is_cyclic())
}

/// False when `e <= ν`, where only the degree is reported.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ct_classification_in_scope(c: *const CtClassification) -> bool {
    c.as_ref().is_some_and(|c| c.0.classified().is_some())
}

/// Number of maximal towers of quadratic steps; 1 outside the dichotomy, 0 if `c` is null.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ct_classification_tower_count(c: *const CtClassification) -> u64 {
    c.as_ref().map_or(0, |c| c.0.classified().map_or(1, |x| x.tower_count))
}

/// Minimal polynomial of `ζ_{2^e}` over the field, or null outside the dichotomy.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ct_classification_min_poly(c: *const CtClassification) -> *mut c_char {
    c.as_ref().and_then(|c| c.0.classified()).map_or(ptr::null_mut(), |x| to_c_string(x.min_poly.to_string()))
}

/// The full classification as JSON. Null if `c` is null.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ct_classification_json(c: *const CtClassification) -> *mut c_char {
    c.as_ref().and_then(|c| serde_json::to_string(&c.0).ok()).map_or(ptr::null_mut(), to_c_string)
}

/// Maximal towers as a JSON array of label arrays, top field first.
///
/// # Safety
/// `field` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_towers_json(field: *const CtField, e: u32, out: *mut *mut c_char) -> CtStatus {
    guard(|| {
        let f = field_ref(field)?;
        check_e(e)?;
        let towers = enumerate_towers(f, e)?;
        write_out(out, to_c_string(json(&towers)?))
    })
}

/// Cross-checks the classifier against the independent oracle. `passed` receives the verdict;
/// `report_json`, if not null, receives the full report.
///
/// # Safety
/// `field` must be a live handle, `passed` a valid pointer, `report_json` null or valid.
#[no_mangle]
pub unsafe extern "C" fn ct_verify(
    field: *const CtField,
    e: u32,
    passed: *mut bool,
    report_json: *mut *mut c_char,
) -> CtStatus {
    guard(|| {
        let f = field_ref(field)?;
        check_e(e)?;
        let report = verify(f, e)?;
        write_out(passed, report.all_passed())?;
        if !report_json.is_null() {
            report_json.write(to_c_string(json(&report)?));
        }
        Ok(())
    })
}
