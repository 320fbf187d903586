//! C interface to `skt-core`.
//!
//! Models are opaque heap handles created by `skt_model_from_*` and released
//! with `skt_model_free`. Every fallible call returns an [`SktStatus`]; on a
//! non-zero status, `skt_last_error_message` describes the failure for the
//! calling thread. Panics are caught at the boundary and reported as
//! [`SktStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use skt_core::catalog::{catalog_model, parse_params};
use skt_core::cli::{parse_model_text, ModelFile};
use skt_core::model::HermitianModel;
use skt_core::skt::{
    alpha_k, lk_entry, vanishing_margin, AlphaRoute, TorsionPackage, Verdict, DEFAULT_TOL,
};
use skt_core::twist::{diophantine_check, Condition, DiophantineInstance};
use skt_core::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SktStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Dimension = 3,
    Degree = 4,
    Definiteness = 5,
    Invariant = 6,
    Domain = 7,
    Consistency = 8,
    Lookup = 9,
    Integrability = 10,
    Construction = 11,
    Precondition = 12,
    Syntax = 13,
    Panic = 14,
}

impl From<&Error> for SktStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Dimension { .. } => SktStatus::Dimension,
            Error::Degree(_) => SktStatus::Degree,
            Error::Definiteness => SktStatus::Definiteness,
            Error::Invariant { .. } => SktStatus::Invariant,
            Error::Domain(_) => SktStatus::Domain,
            Error::Consistency { .. } => SktStatus::Consistency,
            Error::Lookup(_) => SktStatus::Lookup,
            Error::Integrability(_) => SktStatus::Integrability,
            Error::Construction(_) => SktStatus::Construction,
            Error::Precondition(_) => SktStatus::Precondition,
            Error::Syntax { .. } => SktStatus::Syntax,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SktAlphaRoute {
    Definitional = 0,
    Lambda = 1,
    Closed = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SktCondition {
    TwoSkt = 0,
    KSkt = 1,
    KSktKahler = 2,
    KPlusOneSkt = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SktVerdict {
    Negative = -1,
    Zero = 0,
    Positive = 1,
}

/// Scalar torsion invariants of a model.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SktTorsion {
    pub norm_h_sq: f64,
    pub norm_theta_sq: f64,
    pub delta_theta: f64,
    pub lambda_trace: f64,
    pub norm_c_sq: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SktMargin {
    pub margin: f64,
    pub chern_expression: f64,
    pub b_hat: f64,
    pub verdict: SktVerdict,
}

/// Opaque model handle.
pub struct SktModel {
    model: HermitianModel,
    torsion: TorsionPackage,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let clean = msg.replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(clean).expect("interior nul removed"));
}

enum Failure {
    Null(&'static str),
    Utf8(&'static str),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SktStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SktStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(&format!("null pointer passed for `{what}`"));
            SktStatus::NullArgument
        }
        Ok(Err(Failure::Utf8(what))) => {
            set_error(&format!("`{what}` is not valid UTF-8"));
            SktStatus::InvalidUtf8
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(&e.to_string());
            SktStatus::from(&e)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("panic: {msg}"));
            SktStatus::Panic
        }
    }
}

unsafe fn c_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Utf8(what))
}

unsafe fn handle<'a>(p: *const SktModel) -> Result<&'a SktModel, Failure> {
    p.as_ref().ok_or(Failure::Null("model"))
}

unsafe fn writable<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

fn boxed(model: HermitianModel) -> Result<*mut SktModel, Failure> {
    let torsion = TorsionPackage::compute(&model)?;
    Ok(Box::into_raw(Box::new(SktModel { model, torsion })))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn skt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn skt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a model document. On success `*out` owns a new handle.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn skt_model_from_text(
    text: *const c_char,
    out: *mut *mut SktModel,
) -> SktStatus {
    guard(|| {
        let slot = writable(out, "out")?;
        *slot = ptr::null_mut();
        let model = parse_model_text(c_str(text, "text")?)?;
        *slot = boxed(model)?;
        Ok(())
    })
}

/// Builds a catalog entry; `params` is `key=value` pairs separated by commas, or null.
/// Twist entries yield the twisted model.
///
/// # Safety
/// `name` and (if non-null) `params` must be nul-terminated strings; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn skt_model_from_catalog(
    name: *const c_char,
    params: *const c_char,
    out: *mut *mut SktModel,
) -> SktStatus {
    guard(|| {
        let slot = writable(out, "out")?;
        *slot = ptr::null_mut();
        let name = c_str(name, "name")?;
        let params = if params.is_null() {
            ""
        } else {
            c_str(params, "params")?
        };
        let model = catalog_model(name, &parse_params(&[params])?)?;
        *slot = boxed(model)?;
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `model` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn skt_model_free(model: *mut SktModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Complex dimension `n` (the real dimension is `2n`).
///
/// # Safety
/// `model` must be a live handle and `n` writable.
#[no_mangle]
pub unsafe extern "C" fn skt_model_complex_dim(model: *const SktModel, n: *mut usize) -> SktStatus {
    guard(|| {
        *writable(n, "n")? = handle(model)?.model.n();
        Ok(())
    })
}

/// # Safety
/// `model` must be a live handle and `torsion` writable.
#[no_mangle]
pub unsafe extern "C" fn skt_model_torsion(
    model: *const SktModel,
    torsion: *mut SktTorsion,
) -> SktStatus {
    guard(|| {
        let t = &handle(model)?.torsion;
        *writable(torsion, "torsion")? = SktTorsion {
            norm_h_sq: t.norm_h_sq,
            norm_theta_sq: t.norm_theta_sq,
            delta_theta: t.delta_theta,
            lambda_trace: t.lambda_trace,
            norm_c_sq: t.norm_c_sq,
        };
        Ok(())
    })
}

/// `α_k` on one route. The lambda and closed routes need `n ≥ 3`.
///
/// # Safety
/// `model` must be a live handle and `value` writable.
#[no_mangle]
pub unsafe extern "C" fn skt_model_alpha(
    model: *const SktModel,
    k: usize,
    route: SktAlphaRoute,
    value: *mut f64,
) -> SktStatus {
    guard(|| {
        let m = handle(model)?;
        let route = match route {
            SktAlphaRoute::Definitional => AlphaRoute::Definitional,
            SktAlphaRoute::Lambda => AlphaRoute::Lambda,
            SktAlphaRoute::Closed => AlphaRoute::Closed,
        };
        *writable(value, "value")? = alpha_k(&m.model, &m.torsion, k, route)?;
        Ok(())
    })
}

/// Whether `ω^l ∧ d(ω^{k-1} ∧ H) = 0` at the default tolerance.
///
/// # Safety
/// `model` must be a live handle and `holds` writable.
#[no_mangle]
pub unsafe extern "C" fn skt_model_is_lk_skt(
    model: *const SktModel,
    l: usize,
    k: usize,
    holds: *mut bool,
) -> SktStatus {
    guard(|| {
        let m = handle(model)?;
        let n = m.model.n();
        if k == 0 || k + l >= n {
            let msg = format!("(l, k) = ({l}, {k}) needs k >= 1 and k + l <= {}", n - 1);
            return Err(Error::Domain(msg).into());
        }
        *writable(holds, "holds")? = lk_entry(&m.model, &m.torsion.h, k, l, DEFAULT_TOL).holds;
        Ok(())
    })
}

/// Vanishing margin at level `k`; needs `n > 2`.
///
/// # Safety
/// `model` must be a live handle and `margin` writable.
#[no_mangle]
pub unsafe extern "C" fn skt_model_margin(
    model: *const SktModel,
    k: usize,
    margin: *mut SktMargin,
) -> SktStatus {
    guard(|| {
        let m = handle(model)?;
        let r = vanishing_margin(&m.model, &m.torsion, k, DEFAULT_TOL)?;
        *writable(margin, "margin")? = SktMargin {
            margin: r.margin,
            chern_expression: r.chern_expression,
            b_hat: r.b_hat,
            verdict: match r.verdict {
                Verdict::Negative => SktVerdict::Negative,
                Verdict::Zero => SktVerdict::Zero,
                Verdict::Positive => SktVerdict::Positive,
            },
        };
        Ok(())
    })
}

/// Serializes the model in the text format. Free the result with `skt_string_free`.
///
/// # Safety
/// `model` must be a live handle and `text` writable.
#[no_mangle]
pub unsafe extern "C" fn skt_model_to_text(
    model: *const SktModel,
    text: *mut *mut c_char,
) -> SktStatus {
    guard(|| {
        let slot = writable(text, "text")?;
        *slot = ptr::null_mut();
        let file = ModelFile::from_model(&handle(model)?.model, Vec::new())?;
        *slot = CString::new(file.serialize())
            .expect("no interior nul")
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn skt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Exact integer check of a torus-bundle SKT condition for
/// `β⁻¹ = [[p1, q1], [p2, q2]]`.
///
/// # Safety
/// `satisfied` must be writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn skt_diophantine_check(
    condition: SktCondition,
    k: u32,
    p1: i64,
    p2: i64,
    q1: i64,
    q2: i64,
    null_f1: bool,
    null_f2: bool,
    satisfied: *mut bool,
) -> SktStatus {
    guard(|| {
        let condition = match condition {
            SktCondition::TwoSkt => Condition::TwoSkt,
            SktCondition::KSkt => Condition::KSkt,
            SktCondition::KSktKahler => Condition::KSktKahler,
            SktCondition::KPlusOneSkt => Condition::KPlusOneSkt,
        };
        let inst = DiophantineInstance::new(condition, k, [p1, p2, q1, q2])
            .with_null_classes(null_f1, null_f2);
        *writable(satisfied, "satisfied")? = diophantine_check(&inst)?.satisfied;
        Ok(())
    })
}
