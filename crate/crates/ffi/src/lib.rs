//! C interface to `totpos`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns a
//! [`TotposStatus`]; on failure a message is available from
//! [`totpos_last_error_message`] on the same thread. Panics are caught and
//! reported as `TOTPOS_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use totpos::lattice::{from_json_str, to_json_string, Direction, Interpretation, LatticeDensity};
use totpos::orderstats::{
    gap_survival_closed, pair_density, reg_inc_beta, DistributionModel, OrderStatContext,
};
use totpos::positivity::{check, CheckMode, CheckOptions, CheckReport};
use totpos::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TotposStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidLattice = 3,
    DimensionMismatch = 4,
    InvalidDirection = 5,
    InvalidModel = 6,
    InvalidRanks = 7,
    Domain = 8,
    Numeric = 9,
    BudgetExceeded = 10,
    Io = 11,
    Panic = 12,
}

/// Checker selector for [`totpos_check`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TotposMode {
    Pairs = 0,
    Full = 1,
    Chain = 2,
    Survival = 3,
    Negative = 4,
}

/// Value interpretation for [`totpos_lattice_new`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TotposInterpretation {
    Density = 0,
    Pmf = 1,
}

/// Opaque lattice handle.
pub struct TotposLattice(LatticeDensity);

/// Opaque check report handle.
pub struct TotposReport(CheckReport);

/// Opaque distribution model handle.
pub struct TotposModel(DistributionModel);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TotposStatus {
    match e {
        Error::DimensionMismatch { .. } => TotposStatus::DimensionMismatch,
        Error::InvalidDirection(_) => TotposStatus::InvalidDirection,
        Error::InvalidLattice { .. }
        | Error::NotPmf { .. }
        | Error::InvalidAxisSet(_)
        | Error::InvalidRelabel(_)
        | Error::InvalidMixture(_) => TotposStatus::InvalidLattice,
        Error::BudgetExceeded { .. } => TotposStatus::BudgetExceeded,
        Error::InvalidTolerance(_)
        | Error::InvalidGrid(_)
        | Error::InvalidSample(_)
        | Error::InsufficientBins(_) => TotposStatus::InvalidArgument,
        Error::InvalidRanks { .. } => TotposStatus::InvalidRanks,
        Error::InvalidModel(_) => TotposStatus::InvalidModel,
        Error::Domain(_) | Error::UndefinedConditioning { .. } => TotposStatus::Domain,
        Error::QuadratureFailure { .. } | Error::Overflow(_) => TotposStatus::Numeric,
        Error::Io(_) => TotposStatus::Io,
        Error::Json(_) => TotposStatus::InvalidLattice,
    }
}

struct Fail(TotposStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(TotposStatus::NullPointer, format!("`{what}` is null"))
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail(TotposStatus::InvalidArgument, msg.into())
}

/// Runs `f`, mapping errors and panics to a status and recording the message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TotposStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TotposStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            TotposStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        Ok(&[])
    } else if p.is_null() {
        Err(null(what))
    } else {
        Ok(std::slice::from_raw_parts(p, len))
    }
}

unsafe fn utf8<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("`{what}` is not valid UTF-8")))
}

fn to_c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| invalid("string contains an interior nul byte"))
}

/// Library version, a static nul-terminated string.
#[no_mangle]
pub extern "C" fn totpos_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn totpos_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from a `*_to_json` call and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn totpos_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a lattice of `ndim` axes with lengths `shape[k]`.
///
/// `axes` holds the concatenated axis coordinates (sum of `shape` entries) or
/// is null for integer coordinates `0..n_k`. `values` holds the row-major
/// cell values (product of `shape` entries). `interpretation` is a
/// [`TotposInterpretation`] value.
///
/// # Safety
/// Pointers must be valid for the lengths implied by `ndim` and `shape`.
#[no_mangle]
pub unsafe extern "C" fn totpos_lattice_new(
    ndim: usize,
    shape: *const usize,
    axes: *const f64,
    values: *const f64,
    interpretation: u32,
    out: *mut *mut TotposLattice,
) -> TotposStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let shape = slice(shape, ndim, "shape")?;
        let n_values = shape
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .ok_or_else(|| invalid("cell count overflows"))?;
        let n_coords = shape
            .iter()
            .try_fold(0usize, |acc, &n| acc.checked_add(n))
            .ok_or_else(|| invalid("axis length overflows"))?;
        let values = slice(values, n_values, "values")?.to_vec();
        let axes: Vec<Vec<f64>> = if axes.is_null() {
            shape
                .iter()
                .map(|&n| (0..n).map(|k| k as f64).collect())
                .collect()
        } else {
            let flat = slice(axes, n_coords, "axes")?;
            let mut start = 0;
            shape
                .iter()
                .map(|&n| {
                    let a = flat[start..start + n].to_vec();
                    start += n;
                    a
                })
                .collect()
        };
        let interp = match interpretation {
            x if x == TotposInterpretation::Density as u32 => Interpretation::Density,
            x if x == TotposInterpretation::Pmf as u32 => Interpretation::Pmf,
            x => return Err(invalid(format!("unknown interpretation {x}"))),
        };
        let lattice = LatticeDensity::new(axes, values, interp)?;
        *out = Box::into_raw(Box::new(TotposLattice(lattice)));
        Ok(())
    })
}

/// Parses a lattice from its JSON document.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn totpos_lattice_from_json(
    json: *const c_char,
    out: *mut *mut TotposLattice,
) -> TotposStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let lattice = from_json_str(utf8(json, "json")?)?;
        *out = Box::into_raw(Box::new(TotposLattice(lattice)));
        Ok(())
    })
}

/// Serializes a lattice to JSON. Free the result with [`totpos_string_free`].
///
/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn totpos_lattice_to_json(
    lattice: *const TotposLattice,
    out: *mut *mut c_char,
) -> TotposStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let l = borrow(lattice, "lattice")?;
        *out = to_c_string(to_json_string(&l.0))?;
        Ok(())
    })
}

/// Number of axes, 0 for a null handle.
///
/// # Safety
/// `lattice` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn totpos_lattice_dim(lattice: *const TotposLattice) -> usize {
    lattice.as_ref().map_or(0, |l| l.0.dim())
}

/// Number of cells, 0 for a null handle.
///
/// # Safety
/// `lattice` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn totpos_lattice_len(lattice: *const TotposLattice) -> usize {
    lattice.as_ref().map_or(0, |l| l.0.len())
}

/// # Safety
/// `lattice` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn totpos_lattice_free(lattice: *mut TotposLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// Runs one positivity check. `alpha` holds `alpha_len` signs (+1 or -1) and
/// may be null with `alpha_len == 0` for the all-ones direction.
/// `mode` is a [`TotposMode`] value; `tol` must be finite and nonnegative.
///
/// # Safety
/// `lattice` must be a live handle, `alpha` valid for `alpha_len` bytes and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn totpos_check(
    lattice: *const TotposLattice,
    alpha: *const i8,
    alpha_len: usize,
    mode: u32,
    tol: f64,
    log_domain: bool,
    out: *mut *mut TotposReport,
) -> TotposStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let l = borrow(lattice, "lattice")?;
        let signs = slice(alpha, alpha_len, "alpha")?;
        let dir = if signs.is_empty() {
            Direction::ones(l.0.dim())
        } else {
            Direction::new(signs.to_vec())?
        };
        let mode = [
            (TotposMode::Pairs, CheckMode::Pairs),
            (TotposMode::Full, CheckMode::Full),
            (TotposMode::Chain, CheckMode::Chain),
            (TotposMode::Survival, CheckMode::Survival),
            (TotposMode::Negative, CheckMode::Negative),
        ]
        .into_iter()
        .find(|(m, _)| *m as u32 == mode)
        .map(|(_, c)| c)
        .ok_or_else(|| invalid(format!("unknown mode {mode}")))?;
        let opts = CheckOptions::with_tol(tol).log_domain(log_domain);
        let report = check(&l.0, &dir, mode, &opts)?;
        *out = Box::into_raw(Box::new(TotposReport(report)));
        Ok(())
    })
}

/// True when the report's verdict is pass. False for null.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn totpos_report_passed(report: *const TotposReport) -> bool {
    report.as_ref().is_some_and(|r| r.0.passed())
}

/// Smallest raw margin seen; `+inf` when nothing was compared, NaN for null.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn totpos_report_min_margin(report: *const TotposReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.min_margin)
}

/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn totpos_report_quadruples_checked(report: *const TotposReport) -> u64 {
    report.as_ref().map_or(0, |r| r.0.quadruples_checked)
}

/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn totpos_report_has_witness(report: *const TotposReport) -> bool {
    report.as_ref().is_some_and(|r| r.0.witness.is_some())
}

/// Serializes a report to JSON. Free the result with [`totpos_string_free`].
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn totpos_report_to_json(
    report: *const TotposReport,
    out: *mut *mut c_char,
) -> TotposStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let r = borrow(report, "report")?;
        *out = to_c_string(r.0.to_json())?;
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn totpos_report_free(report: *mut TotposReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Parses a model spec such as `exp:1`, `uniform:0,1`, `pareto:1,2` or
/// `weibull:0.5,1`.
///
/// # Safety
/// `spec` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn totpos_model_parse(
    spec: *const c_char,
    out: *mut *mut TotposModel,
) -> TotposStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let model: DistributionModel = utf8(spec, "spec")?.parse()?;
        *out = Box::into_raw(Box::new(TotposModel(model)));
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn totpos_model_free(model: *mut TotposModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Joint density of the `i`-th and `j`-th smallest of `d` draws at `(x, y)`.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn totpos_pair_density(
    model: *const TotposModel,
    d: usize,
    i: usize,
    j: usize,
    x: f64,
    y: f64,
    out: *mut f64,
) -> TotposStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let m = borrow(model, "model")?;
        let ctx = OrderStatContext::new(d, i, j)?;
        *out = pair_density(&m.0, &ctx, x, y);
        Ok(())
    })
}

/// `P(X_(j) - X_(i) > y | X_(i) = x)` in closed form.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn totpos_gap_survival(
    model: *const TotposModel,
    d: usize,
    i: usize,
    j: usize,
    x: f64,
    y: f64,
    out: *mut f64,
) -> TotposStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let m = borrow(model, "model")?;
        let ctx = OrderStatContext::new(d, i, j)?;
        *out = gap_survival_closed(&m.0, &ctx, x, y)?;
        Ok(())
    })
}

/// Regularized incomplete beta function `I_u(a, b)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn totpos_reg_inc_beta(
    u: f64,
    a: f64,
    b: f64,
    out: *mut f64,
) -> TotposStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = reg_inc_beta(u, a, b)?;
        Ok(())
    })
}
