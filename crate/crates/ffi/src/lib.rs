//! C ABI for the pulse-tangle simulator.
//!
//! Every function returns a [`PtStatus`]; results are written through out
//! pointers. On failure a description of the most recent error on the calling
//! thread is available from [`pt_last_error_message`]. Parameter sets are
//! opaque [`PtParams`] handles created by [`pt_params_new`] and released with
//! [`pt_params_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64 as C64;
use pulse_tangle::symmetric::TangleSeries;
use pulse_tangle::{
    closed_tangle_analytic, pure_tangle, run_closed_evolution, run_full_evolution, run_lumped_evolution,
    tangle_upper_bound, wootters_tangle, AtomState, ComplexMatrix, DensityOperator, Error, InitialState, PureState,
    SimParams,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NumericalFailure = 3,
    BufferTooSmall = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PtMethod {
    Full = 0,
    Lumped = 1,
    Closed = 2,
    Analytic = 3,
    Bound = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PtInitialState {
    /// |e⟩
    Excited = 0,
    /// |g⟩
    Ground = 1,
    /// (|e⟩+|g⟩)/√2
    PlusX = 2,
    /// (|e⟩−|g⟩)/√2
    MinusX = 3,
    /// (|e⟩+i|g⟩)/√2
    PlusY = 4,
    /// (|e⟩−i|g⟩)/√2
    MinusY = 5,
}

impl From<PtInitialState> for InitialState {
    fn from(s: PtInitialState) -> Self {
        match s {
            PtInitialState::Excited => InitialState::Excited,
            PtInitialState::Ground => InitialState::Ground,
            PtInitialState::PlusX => InitialState::PlusX,
            PtInitialState::MinusX => InitialState::MinusX,
            PtInitialState::PlusY => InitialState::PlusY,
            PtInitialState::MinusY => InitialState::MinusY,
        }
    }
}

/// Opaque parameter set.
pub struct PtParams {
    inner: SimParams,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PtStatus {
    match e {
        Error::InvalidParams(_)
        | Error::DimensionMismatch { .. }
        | Error::SubsystemOutOfRange { .. }
        | Error::UnknownName { .. }
        | Error::Config(_)
        | Error::Unnormalized { .. }
        | Error::NonFinite(_)
        | Error::NotHermitian { .. }
        | Error::TraceViolation { .. }
        | Error::NotPositive { .. } => PtStatus::InvalidArgument,
        _ => PtStatus::NumericalFailure,
    }
}

/// Runs `f`, recording any error or panic for [`pt_last_error_message`].
fn guard<F: FnOnce() -> Result<(), PtFailure>>(f: F) -> PtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PtStatus::Ok,
        Ok(Err(PtFailure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("panic inside pulse-tangle".into());
            PtStatus::Panic
        }
    }
}

struct PtFailure(PtStatus, String);

impl From<Error> for PtFailure {
    fn from(e: Error) -> Self {
        PtFailure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> PtFailure {
    PtFailure(PtStatus::NullPointer, format!("{what} is null"))
}

unsafe fn params_ref<'a>(p: *const PtParams) -> Result<&'a SimParams, PtFailure> {
    p.as_ref().map(|p| &p.inner).ok_or_else(|| null("params"))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), PtFailure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn series(params: &SimParams, method: PtMethod) -> Result<TangleSeries, PtFailure> {
    Ok(match method {
        PtMethod::Full => run_full_evolution(params)?,
        PtMethod::Lumped => run_lumped_evolution(params)?,
        PtMethod::Closed => run_closed_evolution(params)?,
        PtMethod::Analytic | PtMethod::Bound => {
            return Err(PtFailure(PtStatus::InvalidArgument, format!("{method:?} has no per-step series")))
        }
    })
}

fn create(params: Result<SimParams, Error>, out: *mut *mut PtParams) -> Result<(), PtFailure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let handle = Box::into_raw(Box::new(PtParams { inner: params? }));
    unsafe { out.write(handle) };
    Ok(())
}

/// Creates a parameter set with one of the six named initial states and the
/// default substep count.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn pt_params_new(
    area_bar: f64,
    n_modes: usize,
    gamma_tau: f64,
    initial: PtInitialState,
    out: *mut *mut PtParams,
) -> PtStatus {
    guard(|| {
        let state = InitialState::from(initial).atom_state();
        create(SimParams::new(area_bar, n_modes, gamma_tau, state), out)
    })
}

/// Creates a parameter set with an arbitrary normalized initial atomic state
/// c_e|e⟩ + c_g|g⟩.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn pt_params_new_custom(
    area_bar: f64,
    n_modes: usize,
    gamma_tau: f64,
    excited_re: f64,
    excited_im: f64,
    ground_re: f64,
    ground_im: f64,
    out: *mut *mut PtParams,
) -> PtStatus {
    guard(|| {
        let state = AtomState::new(C64::new(excited_re, excited_im), C64::new(ground_re, ground_im))?;
        create(SimParams::new(area_bar, n_modes, gamma_tau, state), out)
    })
}

/// Sets the number of RK4 substeps per coarse-grained interval.
///
/// # Safety
/// `params` must come from `pt_params_new*` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pt_params_set_substeps(params: *mut PtParams, substeps: usize) -> PtStatus {
    guard(|| {
        let p = params.as_mut().ok_or_else(|| null("params"))?;
        p.inner = p.inner.with_substeps(substeps)?;
        Ok(())
    })
}

/// Releases a parameter set. Null is ignored.
///
/// # Safety
/// `params` must come from `pt_params_new*` and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pt_params_free(params: *mut PtParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Final tangle of the chosen method.
///
/// # Safety
/// `params` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn pt_final_tangle(params: *const PtParams, method: PtMethod, out: *mut f64) -> PtStatus {
    guard(|| {
        let p = params_ref(params)?;
        let tangle = match method {
            PtMethod::Analytic => closed_tangle_analytic(&p.initial, p.kappa_tau()).value(),
            PtMethod::Bound => tangle_upper_bound(p)?.bound,
            _ => series(p, method)?.final_tangle(),
        };
        write_out(out, tangle, "out")
    })
}

/// Tangle after each of the N intervals for the full, lumped or closed model.
/// Writes min(N, capacity) values and the number needed to `written`; returns
/// `BufferTooSmall` when capacity < N.
///
/// # Safety
/// `params` must be a live handle, `buffer` valid for `capacity` doubles and
/// `written` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn pt_tangle_series(
    params: *const PtParams,
    method: PtMethod,
    buffer: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> PtStatus {
    guard(|| {
        let p = params_ref(params)?;
        if written.is_null() {
            return Err(null("written"));
        }
        if buffer.is_null() && capacity > 0 {
            return Err(null("buffer"));
        }
        let s = series(p, method)?;
        written.write(s.entries.len());
        for (k, e) in s.entries.iter().take(capacity).enumerate() {
            buffer.add(k).write(e.tangle);
        }
        if capacity < s.entries.len() {
            return Err(PtFailure(
                PtStatus::BufferTooSmall,
                format!("need {} values, buffer holds {capacity}", s.entries.len()),
            ));
        }
        Ok(())
    })
}

/// Upper bound on the atom/all-mode tangle. `closure_defect` (nullable)
/// receives P_NJ + Σ P_LJ − 1.
///
/// # Safety
/// `params` must be a live handle, `bound` valid for writing and
/// `closure_defect` null or valid for writing.
#[no_mangle]
pub unsafe extern "C" fn pt_upper_bound(
    params: *const PtParams,
    bound: *mut f64,
    closure_defect: *mut f64,
) -> PtStatus {
    guard(|| {
        let p = params_ref(params)?;
        let b = tangle_upper_bound(p)?;
        write_out(bound, b.bound, "bound")?;
        if !closure_defect.is_null() {
            closure_defect.write(b.statistics.closure_defect());
        }
        Ok(())
    })
}

unsafe fn complex_array(re: *const f64, im: *const f64, len: usize) -> Result<Vec<C64>, PtFailure> {
    if re.is_null() || im.is_null() {
        return Err(null("input array"));
    }
    let re = std::slice::from_raw_parts(re, len);
    let im = std::slice::from_raw_parts(im, len);
    Ok(re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)).collect())
}

/// Wootters tangle of a two-qubit density matrix given as 16 row-major real
/// and imaginary parts.
///
/// # Safety
/// `re` and `im` must each point to 16 doubles; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn pt_wootters_tangle(re: *const f64, im: *const f64, out: *mut f64) -> PtStatus {
    guard(|| {
        let m = ComplexMatrix::from_vec(4, 4, complex_array(re, im, 16)?)?;
        let t = wootters_tangle(&DensityOperator::new(m, vec![2, 2])?)?;
        write_out(out, t.value(), "out")
    })
}

/// Tangle 4 det ρ_A of a normalized pure state of a qubit and a
/// `field_dim`-level system, amplitudes ordered qubit-major.
///
/// # Safety
/// `re` and `im` must each point to 2·field_dim doubles; `out` must be valid
/// for writing.
#[no_mangle]
pub unsafe extern "C" fn pt_pure_tangle(re: *const f64, im: *const f64, field_dim: usize, out: *mut f64) -> PtStatus {
    guard(|| {
        let amplitudes = complex_array(re, im, 2 * field_dim)?;
        let t = pure_tangle(&PureState::new(amplitudes, vec![2, field_dim])?)?;
        write_out(out, t.value(), "out")
    })
}

/// First-order closed-system tangle for a named initial state.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn pt_closed_tangle_analytic(initial: PtInitialState, kappa_tau: f64, out: *mut f64) -> PtStatus {
    guard(|| {
        if !(kappa_tau.is_finite() && kappa_tau >= 0.0) {
            return Err(PtFailure(PtStatus::InvalidArgument, format!("kappa_tau {kappa_tau} must be finite and >= 0")));
        }
        let state = InitialState::from(initial).atom_state();
        write_out(out, closed_tangle_analytic(&state, kappa_tau).value(), "out")
    })
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
