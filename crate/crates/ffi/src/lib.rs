//! C interface to `multislice-core`.
//!
//! Every fallible function returns an [`MsStatus`]; on failure the message
//! is available from [`ms_last_error_message`] on the same thread. Handles
//! are opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use multislice_core::bounds::BoundSpec;
use multislice_core::cdist::{convex_distance, SubsetIndicator};
use multislice_core::harness::{clopper_pearson, run_tail, TailExperiment, TailReport};
use multislice_core::sampling::sample_uniform;
use multislice_core::{Configuration, Error, MultisliceSpec, StreamFactory, Verdict};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidSpec = 2,
    EnumerationTooLarge = 3,
    IndexOutOfRange = 4,
    InvalidArgument = 5,
    ShapeMismatch = 6,
    Domain = 7,
    Hypothesis = 8,
    UnknownId = 9,
    Config = 10,
    Io = 11,
    BufferTooSmall = 12,
    Panic = 13,
}

impl From<&Error> for MsStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidSpec(_) => MsStatus::InvalidSpec,
            Error::EnumerationTooLarge { .. } => MsStatus::EnumerationTooLarge,
            Error::IndexOutOfRange { .. } => MsStatus::IndexOutOfRange,
            Error::InvalidArgument(_) => MsStatus::InvalidArgument,
            Error::ShapeMismatch(_) => MsStatus::ShapeMismatch,
            Error::Domain(_) => MsStatus::Domain,
            Error::Hypothesis(_) => MsStatus::Hypothesis,
            Error::UnknownId(_) => MsStatus::UnknownId,
            Error::Config(_) | Error::Json(_) => MsStatus::Config,
            Error::Io(_) => MsStatus::Io,
        }
    }
}

/// Tail verdicts as integers: `PASS`, `FAIL`, `DOMINATED`, `VIOLATED`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsVerdict {
    Pass = 0,
    Fail = 1,
    Dominated = 2,
    Violated = 3,
}

impl From<Verdict> for MsVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Pass => MsVerdict::Pass,
            Verdict::Fail => MsVerdict::Fail,
            Verdict::Dominated => MsVerdict::Dominated,
            Verdict::Violated => MsVerdict::Violated,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MsTailRow {
    pub t: f64,
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub bound: f64,
    pub verdict: MsVerdict,
}

/// A multislice specification.
pub struct MsSpec(MultisliceSpec);

/// A finite set of configurations of equal length.
pub struct MsSet(SubsetIndicator);

/// A tail bound with all parameters fixed.
pub struct MsBound(BoundSpec);

/// The result of a tail experiment.
pub struct MsTailReport(TailReport);

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into_bytes());
}

fn guard(f: impl FnOnce() -> Result<(), (MsStatus, String)>) -> MsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            MsStatus::Panic
        }
    }
}

fn core<T>(r: multislice_core::Result<T>) -> Result<T, (MsStatus, String)> {
    r.map_err(|e| ((&e).into(), e.to_string()))
}

fn null(name: &str) -> (MsStatus, String) {
    (MsStatus::NullPointer, format!("`{name}` is null"))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], (MsStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(name));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, (MsStatus, String)> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (MsStatus::InvalidArgument, format!("`{name}` is not UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, (MsStatus, String)> {
    p.as_mut().ok_or_else(|| null(name))
}

unsafe fn free_box<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Length in bytes of the last error message on this thread, excluding the
/// terminating NUL.
#[no_mangle]
pub extern "C" fn ms_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().len())
}

/// Copies the last error message, NUL-terminated, into `buf`. Fails with
/// `BufferTooSmall` unless `len > ms_last_error_length()`.
///
/// # Safety
/// `buf` must point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ms_last_error_message(buf: *mut c_char, len: usize) -> MsStatus {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if buf.is_null() {
            return MsStatus::NullPointer;
        }
        if len <= msg.len() {
            return MsStatus::BufferTooSmall;
        }
        ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, msg.len());
        *buf.add(msg.len()) = 0;
        MsStatus::Ok
    })
}

/// Builds a spec from `len` counts and `len` strictly increasing values.
///
/// # Safety
/// `kappa` and `values` must point to `len` elements; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_spec_new(
    kappa: *const usize,
    values: *const f64,
    len: usize,
    out: *mut *mut MsSpec,
) -> MsStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let kappa = slice_arg(kappa, len, "kappa")?.to_vec();
        let values = slice_arg(values, len, "values")?.to_vec();
        let spec = core(MultisliceSpec::new(kappa, values))?;
        *out = Box::into_raw(Box::new(MsSpec(spec)));
        Ok(())
    })
}

/// # Safety
/// `spec` must be null or come from [`ms_spec_new`], and not be used again.
#[no_mangle]
pub unsafe extern "C" fn ms_spec_free(spec: *mut MsSpec) {
    free_box(spec);
}

/// `N`, the configuration length; 0 for a null handle.
///
/// # Safety
/// `spec` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ms_spec_total(spec: *const MsSpec) -> usize {
    spec.as_ref().map_or(0, |s| s.0.total())
}

/// `|Ω_κ|`; `EnumerationTooLarge` if it does not fit in 64 bits.
///
/// # Safety
/// `spec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_spec_cardinality(spec: *const MsSpec, out: *mut u64) -> MsStatus {
    guard(|| {
        let spec = spec.as_ref().ok_or_else(|| null("spec"))?;
        let out = out_arg(out, "out")?;
        let c = core(spec.0.cardinality())?;
        *out = u64::try_from(c).map_err(|_| {
            (MsStatus::EnumerationTooLarge, format!("cardinality {c} exceeds 64 bits"))
        })?;
        Ok(())
    })
}

/// Writes sample `index` of the stream family `seed`, a uniform
/// configuration of length `N`, into `out`. The same `(seed, index)` gives
/// the same configuration as the Rust API and the CLI.
///
/// # Safety
/// `spec` must be a live handle and `out` must point to `out_len` writable values.
#[no_mangle]
pub unsafe extern "C" fn ms_sample(
    spec: *const MsSpec,
    seed: u64,
    index: u64,
    out: *mut f64,
    out_len: usize,
) -> MsStatus {
    guard(|| {
        let spec = spec.as_ref().ok_or_else(|| null("spec"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let n = spec.0.total();
        if out_len < n {
            return Err((MsStatus::BufferTooSmall, format!("need {n} values, got room for {out_len}")));
        }
        let mut rng = StreamFactory::new(seed).stream(index);
        let cfg = sample_uniform(&spec.0, &mut rng);
        slice::from_raw_parts_mut(out, n).copy_from_slice(cfg.entries());
        Ok(())
    })
}

/// A set of `count` configurations of length `len`, stored row-major.
///
/// # Safety
/// `entries` must point to `count * len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_set_new(
    entries: *const f64,
    count: usize,
    len: usize,
    out: *mut *mut MsSet,
) -> MsStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let total = count
            .checked_mul(len)
            .ok_or_else(|| (MsStatus::InvalidArgument, "count * len overflows".to_string()))?;
        let data = slice_arg(entries, total, "entries")?;
        let members = if len == 0 {
            Vec::new()
        } else {
            data.chunks(len).map(|c| Configuration::new(c.to_vec())).collect()
        };
        let set = core(SubsetIndicator::new(members))?;
        *out = Box::into_raw(Box::new(MsSet(set)));
        Ok(())
    })
}

/// # Safety
/// `set` must be null or come from [`ms_set_new`], and not be used again.
#[no_mangle]
pub unsafe extern "C" fn ms_set_free(set: *mut MsSet) {
    free_box(set);
}

/// Convex distance from `omega` to `set`. `value` is an upper bound and
/// `value − gap` a lower bound.
///
/// # Safety
/// `set` must be a live handle, `omega` must point to `len` values and
/// `value`, `gap` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_convex_distance(
    set: *const MsSet,
    omega: *const f64,
    len: usize,
    tol: f64,
    value: *mut f64,
    gap: *mut f64,
) -> MsStatus {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| null("set"))?;
        let omega = Configuration::new(slice_arg(omega, len, "omega")?.to_vec());
        let (value, gap) = (out_arg(value, "value")?, out_arg(gap, "gap")?);
        let d = core(convex_distance(&omega, &set.0, tol))?;
        *value = d.value;
        *gap = d.gap;
        Ok(())
    })
}

/// Parses a bound from TOML, e.g. `id = "serfling"` plus its parameters.
///
/// # Safety
/// `toml` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_bound_from_toml(toml: *const c_char, out: *mut *mut MsBound) -> MsStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let text = str_arg(toml, "toml")?;
        let spec = core(BoundSpec::from_toml(text))?;
        core(spec.evaluate(0.0))?;
        *out = Box::into_raw(Box::new(MsBound(spec)));
        Ok(())
    })
}

/// # Safety
/// `bound` must be null or come from [`ms_bound_from_toml`], and not be used again.
#[no_mangle]
pub unsafe extern "C" fn ms_bound_free(bound: *mut MsBound) {
    free_box(bound);
}

/// The bound at `t`, capped at 1.
///
/// # Safety
/// `bound` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_bound_evaluate(bound: *const MsBound, t: f64, out: *mut f64) -> MsStatus {
    guard(|| {
        let bound = bound.as_ref().ok_or_else(|| null("bound"))?;
        let out = out_arg(out, "out")?;
        *out = core(bound.0.evaluate(t))?.capped;
        Ok(())
    })
}

/// Exact binomial confidence interval at level `1 − alpha`.
///
/// # Safety
/// `lo` and `hi` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_clopper_pearson(
    successes: u64,
    trials: u64,
    alpha: f64,
    lo: *mut f64,
    hi: *mut f64,
) -> MsStatus {
    guard(|| {
        let (lo, hi) = (out_arg(lo, "lo")?, out_arg(hi, "hi")?);
        (*lo, *hi) = core(clopper_pearson(successes, trials, alpha))?;
        Ok(())
    })
}

/// Runs a tail experiment described by a TOML config.
///
/// # Safety
/// `config` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_tail_run(config: *const c_char, out: *mut *mut MsTailReport) -> MsStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let exp = core(TailExperiment::from_toml(str_arg(config, "config")?))?;
        let report = core(run_tail(&exp))?;
        *out = Box::into_raw(Box::new(MsTailReport(report)));
        Ok(())
    })
}

/// # Safety
/// `report` must be null or come from [`ms_tail_run`], and not be used again.
#[no_mangle]
pub unsafe extern "C" fn ms_tail_report_free(report: *mut MsTailReport) {
    free_box(report);
}

/// Number of grid rows; 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ms_tail_report_len(report: *const MsTailReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.rows.len())
}

/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_tail_report_row(
    report: *const MsTailReport,
    index: usize,
    out: *mut MsTailRow,
) -> MsStatus {
    guard(|| {
        let report = report.as_ref().ok_or_else(|| null("report"))?;
        let out = out_arg(out, "out")?;
        let rows = &report.0.rows;
        let r = rows.get(index).ok_or_else(|| {
            let e = Error::IndexOutOfRange { index, len: rows.len() };
            ((&e).into(), e.to_string())
        })?;
        *out = MsTailRow {
            t: r.t,
            p_hat: r.p_hat,
            ci_lo: r.ci_lo,
            ci_hi: r.ci_hi,
            bound: r.bound,
            verdict: r.verdict.into(),
        };
        Ok(())
    })
}
