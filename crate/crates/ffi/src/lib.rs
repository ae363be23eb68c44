//! C interface to `roundtrip-core`.
//!
//! States and density matrices cross the boundary as opaque handles that the
//! caller releases with the matching `*_free` function. Every fallible call
//! returns an [`RtStatus`]; on failure [`rt_last_error_message`] describes the
//! most recent error on the calling thread. Results are written through out
//! pointers, which are left untouched on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use roundtrip_core::estimation::{
    baselines, circular_rms, holevo_variance, mm_error, mm_error_closed, povm_distribution,
    MmErrorInputs,
};
use roundtrip_core::fock::{apply_phase, DensityMatrix, FockVector};
use roundtrip_core::protocol::{
    closed_form_rho, closed_form_sigma, roundtrip_oracle, RoundTripConfig,
};
use roundtrip_core::states::{mm_state, optimal_phase_state, MmStateSpec};
use roundtrip_core::Error;

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RtStatus {
    Ok = 0,
    InvalidArgument = 1,
    DimensionMismatch = 2,
    /// A matrix or vector failed a physicality check (trace, norm, positivity).
    NotPhysical = 3,
    Numerical = 4,
    NullPointer = 5,
    Panic = 6,
}

/// Pure state in a truncated Fock space.
pub struct RtFockVector(FockVector);

/// Density matrix in a truncated Fock space.
pub struct RtDensityMatrix(DensityMatrix);

/// Parameters of the round trip, mirroring `RoundTripConfig`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct RtRoundTripConfig {
    pub phi: f64,
    pub theta: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub m: usize,
    pub rounds: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn status_of(e: &Error) -> RtStatus {
    match e {
        Error::InvalidParameter { .. } => RtStatus::InvalidArgument,
        Error::DimensionMismatch { .. } => RtStatus::DimensionMismatch,
        Error::NotHermitian { .. }
        | Error::BadTrace { .. }
        | Error::NotNormalized { .. }
        | Error::NotPositive { .. }
        | Error::NotTracePreserving { .. } => RtStatus::NotPhysical,
        Error::Numerical(_) => RtStatus::Numerical,
    }
}

struct Failure(RtStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(RtStatus::NullPointer, format!("{what} is null"))
}

fn guard<F>(f: F) -> RtStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            RtStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            RtStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn rt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a normalized state from `len` amplitudes given as separate real
/// and imaginary arrays.
///
/// # Safety
/// `re` and `im` must each point to `len` readable doubles; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn rt_fock_vector_new(
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut RtFockVector,
) -> RtStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(null("amplitude array"));
        }
        let re = std::slice::from_raw_parts(re, len);
        let im = std::slice::from_raw_parts(im, len);
        let amps = re
            .iter()
            .zip(im)
            .map(|(r, i)| Complex64::new(*r, *i))
            .collect();
        let v = FockVector::new(amps)?;
        write(out, boxed(RtFockVector(v)), "out")
    })
}

/// Optimal phase state of dimension `m + 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rt_optimal_phase_state(m: usize, out: *mut *mut RtFockVector) -> RtStatus {
    guard(|| write(out, boxed(RtFockVector(optimal_phase_state(m)?)), "out"))
}

/// `(|M⟩ + |M′⟩)/√2` in dimension `m + 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rt_mm_state(
    m: usize,
    m_prime: usize,
    out: *mut *mut RtFockVector,
) -> RtStatus {
    guard(|| {
        let spec = MmStateSpec::new(m, m_prime)?;
        write(out, boxed(RtFockVector(mm_state(spec)?)), "out")
    })
}

/// Dimension of `v`, or 0 for a null handle.
///
/// # Safety
/// `v` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rt_fock_vector_dim(v: *const RtFockVector) -> usize {
    v.as_ref().map_or(0, |v| v.0.dim())
}

/// Amplitude `⟨n|v⟩`.
///
/// # Safety
/// `v` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rt_fock_vector_amp(
    v: *const RtFockVector,
    n: usize,
    re: *mut f64,
    im: *mut f64,
) -> RtStatus {
    guard(|| {
        let v = deref(v, "vector")?;
        if n >= v.0.dim() {
            return Err(Failure(
                RtStatus::InvalidArgument,
                format!("index {n} outside dimension {}", v.0.dim()),
            ));
        }
        let a = v.0.amp(n);
        write(re, a.re, "re")?;
        write(im, a.im, "im")
    })
}

/// Releases a vector handle. Null is ignored.
///
/// # Safety
/// `v` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rt_fock_vector_free(v: *mut RtFockVector) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// `|v⟩⟨v|`.
///
/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rt_fock_vector_to_density(
    v: *const RtFockVector,
    out: *mut *mut RtDensityMatrix,
) -> RtStatus {
    guard(|| {
        let v = deref(v, "vector")?;
        write(out, boxed(RtDensityMatrix(v.0.to_density())), "out")
    })
}

/// Evolves `|input⟩⟨input|` through the round trip described by `cfg`.
///
/// # Safety
/// `input` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rt_roundtrip_oracle(
    input: *const RtFockVector,
    cfg: RtRoundTripConfig,
    out: *mut *mut RtDensityMatrix,
) -> RtStatus {
    guard(|| {
        let input = deref(input, "input")?;
        let cfg = RoundTripConfig {
            phi: cfg.phi,
            theta: cfg.theta,
            eta1: cfg.eta1,
            eta2: cfg.eta2,
            m: cfg.m,
            rounds: cfg.rounds,
        };
        let rho = roundtrip_oracle(&input.0, &cfg)?;
        write(out, boxed(RtDensityMatrix(rho)), "out")
    })
}

/// Analytic single-round output of the optimal phase state.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rt_closed_form_rho(
    m: usize,
    eta: f64,
    phi: f64,
    out: *mut *mut RtDensityMatrix,
) -> RtStatus {
    guard(|| {
        write(
            out,
            boxed(RtDensityMatrix(closed_form_rho(m, eta, phi)?)),
            "out",
        )
    })
}

/// Analytic single-round output of the M&M state.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rt_closed_form_sigma(
    m: usize,
    m_prime: usize,
    eta: f64,
    phi: f64,
    out: *mut *mut RtDensityMatrix,
) -> RtStatus {
    guard(|| {
        let spec = MmStateSpec::new(m, m_prime)?;
        write(
            out,
            boxed(RtDensityMatrix(closed_form_sigma(spec, eta, phi)?)),
            "out",
        )
    })
}

/// Dimension of `rho`, or 0 for a null handle.
///
/// # Safety
/// `rho` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rt_density_dim(rho: *const RtDensityMatrix) -> usize {
    rho.as_ref().map_or(0, |r| r.0.dim())
}

/// Element `⟨row|ρ|col⟩`.
///
/// # Safety
/// `rho` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rt_density_get(
    rho: *const RtDensityMatrix,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> RtStatus {
    guard(|| {
        let rho = deref(rho, "rho")?;
        let dim = rho.0.dim();
        if row >= dim || col >= dim {
            return Err(Failure(
                RtStatus::InvalidArgument,
                format!("element ({row}, {col}) outside dimension {dim}"),
            ));
        }
        let z = rho.0.get(row, col);
        write(re, z.re, "re")?;
        write(im, z.im, "im")
    })
}

/// Real part of the trace.
///
/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rt_density_trace(rho: *const RtDensityMatrix, out: *mut f64) -> RtStatus {
    guard(|| write(out, deref(rho, "rho")?.0.trace(), "out"))
}

/// Largest elementwise modulus of `a − b`.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rt_density_max_abs_diff(
    a: *const RtDensityMatrix,
    b: *const RtDensityMatrix,
    out: *mut f64,
) -> RtStatus {
    guard(|| {
        let (dev, _) = deref(a, "a")?.0.max_abs_diff(&deref(b, "b")?.0)?;
        write(out, dev, "out")
    })
}

/// `e^{iφn̂} ρ e^{−iφn̂}`.
///
/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rt_density_apply_phase(
    rho: *const RtDensityMatrix,
    phi: f64,
    out: *mut *mut RtDensityMatrix,
) -> RtStatus {
    guard(|| {
        let shifted = apply_phase(&deref(rho, "rho")?.0, phi)?;
        write(out, boxed(RtDensityMatrix(shifted)), "out")
    })
}

/// Releases a density-matrix handle. Null is ignored.
///
/// # Safety
/// `rho` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rt_density_free(rho: *mut RtDensityMatrix) {
    if !rho.is_null() {
        drop(Box::from_raw(rho));
    }
}

/// Writes the `m + 1` Pegg-Barnett outcome probabilities of `rho` to `probs`.
///
/// # Safety
/// `rho` must be a live handle; `probs` must hold `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn rt_povm_distribution(
    rho: *const RtDensityMatrix,
    m: usize,
    probs: *mut f64,
    len: usize,
) -> RtStatus {
    guard(|| {
        let dist = povm_distribution(&deref(rho, "rho")?.0, m, 0.0)?;
        if probs.is_null() {
            return Err(null("probs"));
        }
        if len != dist.probs().len() {
            return Err(Failure(
                RtStatus::DimensionMismatch,
                format!("buffer holds {len} values, need {}", dist.probs().len()),
            ));
        }
        ptr::copy_nonoverlapping(dist.probs().as_ptr(), probs, len);
        Ok(())
    })
}

/// Circular RMS error of the Pegg-Barnett estimate about `true_phi`.
///
/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rt_circular_rms(
    rho: *const RtDensityMatrix,
    m: usize,
    true_phi: f64,
    out: *mut f64,
) -> RtStatus {
    guard(|| {
        let dist = povm_distribution(&deref(rho, "rho")?.0, m, true_phi)?;
        write(out, circular_rms(&dist), "out")
    })
}

/// Holevo phase variance; `+∞` when the phase moment vanishes.
///
/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rt_holevo_variance(
    rho: *const RtDensityMatrix,
    out: *mut f64,
) -> RtStatus {
    guard(|| write(out, holevo_variance(&deref(rho, "rho")?.0), "out"))
}

/// Error-propagation figure of an M&M round-trip output.
///
/// # Safety
/// `sigma` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rt_mm_error(
    sigma: *const RtDensityMatrix,
    m: usize,
    m_prime: usize,
    out: *mut f64,
) -> RtStatus {
    guard(|| {
        let spec = MmStateSpec::new(m, m_prime)?;
        write(out, mm_error(&deref(sigma, "sigma")?.0, &spec)?, "out")
    })
}

/// Analytic M&M error from the `Θ` and `Γ` sums.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rt_mm_error_closed(
    theta_sum: f64,
    gamma_sum: f64,
    delta: usize,
    phi: f64,
    out: *mut f64,
) -> RtStatus {
    guard(|| {
        let inputs = MmErrorInputs::new(theta_sum, gamma_sum, delta, phi)?;
        write(out, mm_error_closed(&inputs), "out")
    })
}

/// `1/(N η^{N/2})`, the best error of the lossy NOON state.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rt_noon_error(n: f64, eta: f64, out: *mut f64) -> RtStatus {
    guard(|| write(out, baselines(n, eta)?.noon_error, "out"))
}
