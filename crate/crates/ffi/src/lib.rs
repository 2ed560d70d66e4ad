//! C ABI over `nonlocal-core`.
//!
//! States and optimisation reports cross the boundary as opaque handles that
//! the caller releases with the matching `*_free` function. Every fallible call
//! returns an [`NlStatus`]; on failure the message is kept per thread and can
//! be copied out with [`nl_last_error_message`]. Panics are caught and mapped
//! to [`NlStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nonlocal_core::cglmp::{cglmp_value, PhaseConfiguration};
use nonlocal_core::optim::{maximize_cglmp, NelderMeadConfig, OptimizationReport};
use nonlocal_core::qmath::DensityMatrix;
use nonlocal_core::scenario::{chsh_expectation, ququart_observables};
use nonlocal_core::states::{
    entanglement_parameter, maximally_entangled, mixed_bell_state, noisy_state, pure_bell_state, MixedBellParams,
    PureBellParams,
};
use nonlocal_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NlStatus {
    Ok = 0,
    InvalidInput = 1,
    DimensionMismatch = 2,
    NegativeProbability = 3,
    NonFinite = 4,
    NoConvergence = 5,
    Io = 6,
    NullPointer = 7,
    Panic = 8,
}

/// Bipartite density matrix.
pub struct NlState {
    rho: DensityMatrix,
}

/// Result of a multi-start `I_N` maximisation.
pub struct NlReport {
    report: OptimizationReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> NlStatus {
    match err {
        Error::InvalidInput(_) => NlStatus::InvalidInput,
        Error::DimensionMismatch { .. } => NlStatus::DimensionMismatch,
        Error::NegativeProbability(_) => NlStatus::NegativeProbability,
        Error::NonFinite(_) => NlStatus::NonFinite,
        Error::NoConvergence { .. } => NlStatus::NoConvergence,
        _ => NlStatus::Io,
    }
}

fn guard(f: impl FnOnce() -> Result<(), NlStatus>) -> NlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NlStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("panic: {msg}"));
            NlStatus::Panic
        }
    }
}

fn check<T>(r: Result<T, Error>) -> Result<T, NlStatus> {
    r.map_err(|e| {
        set_last_error(e.to_string());
        status_of(&e)
    })
}

fn null(what: &str) -> NlStatus {
    set_last_error(format!("{what} is null"));
    NlStatus::NullPointer
}

/// # Safety
/// `p` must be null or valid for reads of `N` values.
unsafe fn read_array<const N: usize>(p: *const f64, what: &str) -> Result<[f64; N], NlStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    let mut out = [0.0; N];
    ptr::copy_nonoverlapping(p, out.as_mut_ptr(), N);
    Ok(out)
}

/// # Safety
/// `out` must be null or valid for writes.
unsafe fn emit<T>(out: *mut T, value: T) -> Result<(), NlStatus> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// # Safety
/// `h` must be null or a live handle from this library.
unsafe fn state_ref<'a>(h: *const NlState) -> Result<&'a NlState, NlStatus> {
    h.as_ref().ok_or_else(|| null("state handle"))
}

unsafe fn report_ref<'a>(h: *const NlReport) -> Result<&'a NlReport, NlStatus> {
    h.as_ref().ok_or_else(|| null("report handle"))
}

fn boxed_state(rho: DensityMatrix) -> *mut NlState {
    Box::into_raw(Box::new(NlState { rho }))
}

/// Copies the calling thread's last error message, NUL-terminated and
/// truncated to `len` bytes. Returns the full message length excluding the
/// terminator, or 0 when no error was recorded. `buf` may be null to query
/// the length.
///
/// # Safety
/// `buf` must be null or valid for writes of `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn nl_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// `(1/√n) Σ_j |jj⟩` as a density matrix.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nl_state_maximally_entangled(n: usize, out: *mut *mut NlState) -> NlStatus {
    guard(|| {
        if n < 2 {
            set_last_error(format!("local dimension must be at least 2, got {n}"));
            return Err(NlStatus::InvalidInput);
        }
        emit(out, boxed_state(maximally_entangled(n).to_density()))
    })
}

/// `p |Ψ_E⟩⟨Ψ_E| + (1 − p) I/n²`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nl_state_noisy(p: f64, n: usize, out: *mut *mut NlState) -> NlStatus {
    guard(|| {
        let rho = check(noisy_state(p, n))?;
        emit(out, boxed_state(rho))
    })
}

/// Pure `H₊` state from three polar angles in `[0, π/2]` and three phases in `[0, 2π)`.
///
/// # Safety
/// `theta` and `gamma` must each point to 3 doubles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nl_state_pure(theta: *const f64, gamma: *const f64, out: *mut *mut NlState) -> NlStatus {
    guard(|| {
        let params = check(PureBellParams::new(
            read_array(theta, "theta")?,
            read_array(gamma, "gamma")?,
        ))?;
        let psi = check(pure_bell_state(&params))?;
        emit(out, boxed_state(psi.to_density()))
    })
}

/// Mixture of the four `H₊` basis states with weights `p[0..4]`.
///
/// # Safety
/// `p` must point to 4 doubles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nl_state_mixed(p: *const f64, out: *mut *mut NlState) -> NlStatus {
    guard(|| {
        let params = check(MixedBellParams::new(read_array(p, "weights")?))?;
        let rho = check(mixed_bell_state(&params))?;
        emit(out, boxed_state(rho))
    })
}

/// Total dimension of the state, 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nl_state_dim(state: *const NlState) -> usize {
    state.as_ref().map_or(0, |s| s.rho.dim())
}

/// # Safety
/// `state` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nl_state_free(state: *mut NlState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Bell operator expectation for the fixed 4×4 observables.
///
/// # Safety
/// `state` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nl_chsh(state: *const NlState, out: *mut f64) -> NlStatus {
    guard(|| {
        let s = state_ref(state)?;
        let v = check(chsh_expectation(&s.rho, &ququart_observables()))?;
        emit(out, v)
    })
}

/// `I_n` at phases `(α₁, α₂, β₁, β₂)`.
///
/// # Safety
/// `state` must be a live handle, `phases` must point to 4 doubles and `out`
/// must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nl_cglmp(state: *const NlState, n: usize, phases: *const f64, out: *mut f64) -> NlStatus {
    guard(|| {
        let s = state_ref(state)?;
        let phases = check(PhaseConfiguration::from_array(read_array(phases, "phases")?))?;
        let v = check(cglmp_value(&s.rho, &phases, n))?;
        emit(out, v)
    })
}

/// Multi-start Nelder-Mead maximisation of `I_n`. A non-positive `tolerance`
/// selects the default.
///
/// # Safety
/// `state` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nl_maximize(
    state: *const NlState,
    n: usize,
    restarts: usize,
    seed: u64,
    tolerance: f64,
    out: *mut *mut NlReport,
) -> NlStatus {
    guard(|| {
        let s = state_ref(state)?;
        let mut config = NelderMeadConfig::default();
        if tolerance > 0.0 {
            config.error_tolerance = tolerance;
        }
        let report = check(maximize_cglmp(&s.rho, n, restarts, seed, &config))?;
        emit(out, Box::into_raw(Box::new(NlReport { report })))
    })
}

/// Best `I_n` found, NaN for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nl_report_value(report: *const NlReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.report.best_value)
}

/// Whether the search behind the best value met its stopping rule.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nl_report_converged(report: *const NlReport) -> bool {
    report.as_ref().is_some_and(|r| r.report.best_converged)
}

/// Writes the best phases, reduced into `[0, n)`, to `out[0..4]`.
///
/// # Safety
/// `report` must be a live handle and `out` valid for writes of 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn nl_report_phases(report: *const NlReport, out: *mut f64) -> NlStatus {
    guard(|| {
        let r = report_ref(report)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let phases = r.report.best_phases.to_array();
        ptr::copy_nonoverlapping(phases.as_ptr(), out, 4);
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nl_report_free(report: *mut NlReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Entanglement parameter `P` and measure `1 − |P|` of a pure `H₊` state.
///
/// # Safety
/// `theta` and `gamma` must each point to 3 doubles; `p` and `measure` must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nl_entanglement(
    theta: *const f64,
    gamma: *const f64,
    p: *mut f64,
    measure: *mut f64,
) -> NlStatus {
    guard(|| {
        let params = check(PureBellParams::new(
            read_array(theta, "theta")?,
            read_array(gamma, "gamma")?,
        ))?;
        let report = check(entanglement_parameter(&check(pure_bell_state(&params))?))?;
        if p.is_null() || measure.is_null() {
            return Err(null("output pointer"));
        }
        p.write(report.p);
        measure.write(report.measure);
        Ok(())
    })
}
