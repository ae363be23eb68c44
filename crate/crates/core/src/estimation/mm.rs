//! Error propagation for the two-component M&M state.

use num_complex::Complex64;

use crate::error::{check_finite, invalid, Error, Result};
use crate::fock::{expectation, CMatrix, DensityMatrix, Observable};
use crate::protocol::ClosedFormSigma;
use crate::states::MmStateSpec;

/// `|sin(δφ)|` (or its matrix-route equivalent) below which the error is
/// reported as the `+∞` sentinel.
pub const STATIONARY_TOLERANCE: f64 = 1e-12;

/// Variance, as a fraction of `⟨A²⟩`, below which `⟨A²⟩ − ⟨A⟩²` has lost too
/// many digits to cancellation. Such points sit next to a stationary point,
/// where the error grows, so they are reported as `+∞`.
pub const CONDITIONING_FLOOR: f64 = 1e-4;

/// `A = Σ_{k=0}^{M′} |M−k⟩⟨M′−k| + |M′−k⟩⟨M−k|` in dimension `dim`.
///
/// The dyads are summed literally. For `δ ≤ M′` the two index sets overlap and
/// `A` chains basis states, so `⟨A²⟩` picks up extra terms.
pub fn observable_a(m: usize, m_prime: usize, dim: usize) -> Result<Observable> {
    if m <= m_prime {
        return Err(invalid(
            "m",
            format!("need M > M′, got M={m}, M′={m_prime}"),
        ));
    }
    if dim < m + 1 {
        return Err(Error::DimensionMismatch {
            expected: m + 1,
            actual: dim,
        });
    }
    let mut a = CMatrix::zeros(dim, dim);
    let one = Complex64::new(1.0, 0.0);
    for k in 0..=m_prime {
        a[(m - k, m_prime - k)] += one;
        a[(m_prime - k, m - k)] += one;
    }
    Observable::new(a)
}

/// `∂⟨obs⟩/∂φ` for a state whose element `(n, m)` depends on φ as
/// `e^{i·sign·(g_n − g_m)φ}`, where `g` is the generator spectrum.
pub fn phase_derivative(
    rho: &DensityMatrix,
    obs: &Observable,
    generator: &[f64],
    sign: f64,
) -> Result<f64> {
    let dim = rho.dim();
    if obs.dim() != dim || generator.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: if obs.dim() != dim {
                obs.dim()
            } else {
                generator.len()
            },
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..dim {
        for m in 0..dim {
            let rate = Complex64::new(0.0, sign * (generator[n] - generator[m]));
            acc += obs.matrix()[(m, n)] * rate * rho.get(n, m);
        }
    }
    Ok(acc.re)
}

/// Inputs of the analytic error formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmErrorInputs {
    pub theta_sum: f64,
    pub gamma_sum: f64,
    pub delta: usize,
    pub phi: f64,
}

impl MmErrorInputs {
    pub fn new(theta_sum: f64, gamma_sum: f64, delta: usize, phi: f64) -> Result<Self> {
        if theta_sum.is_nan() || theta_sum < 0.0 {
            return Err(invalid(
                "theta_sum",
                format!("must be non-negative, got {theta_sum}"),
            ));
        }
        if gamma_sum.is_nan() || gamma_sum.abs() > 1.0 + 1e-12 {
            return Err(invalid(
                "gamma_sum",
                format!("must satisfy |Γ| ≤ 1, got {gamma_sum}"),
            ));
        }
        if delta == 0 {
            return Err(invalid("delta", "must be positive"));
        }
        Ok(Self {
            theta_sum,
            gamma_sum,
            delta,
            phi: check_finite("phi", phi)?,
        })
    }
}

impl ClosedFormSigma {
    pub fn error_inputs(&self, phi: f64) -> Result<MmErrorInputs> {
        MmErrorInputs::new(self.theta_sum(), self.gamma_sum(), self.spec().delta(), phi)
    }
}

/// `√(Θ − cos²(δφ)Γ²) / (δ|sin(δφ)Γ|)`; `+∞` at stationary points or `Γ = 0`.
pub fn mm_error_closed(inputs: &MmErrorInputs) -> f64 {
    let delta = inputs.delta as f64;
    let sin = (delta * inputs.phi).sin();
    if sin.abs() <= STATIONARY_TOLERANCE || inputs.gamma_sum.abs() < f64::MIN_POSITIVE {
        return f64::INFINITY;
    }
    let g2 = inputs.gamma_sum * inputs.gamma_sum;
    // Θ − Γ²cos² rewritten without cancellation near sin = 0
    let variance = ((inputs.theta_sum - g2) + g2 * sin * sin).max(0.0);
    variance.sqrt() / (delta * (sin * inputs.gamma_sum).abs())
}

/// `ΔA / |∂⟨A⟩/∂φ|` computed from the matrix `sigma`, a round-trip output of
/// the M&M state `spec`.
///
/// `⟨A⟩` and `⟨A²⟩` come from traces against `A`; the derivative comes from
/// the φ-dependence `e^{−i(n−m)φ}` of the output's matrix elements.
pub fn mm_error(sigma: &DensityMatrix, spec: &MmStateSpec) -> Result<f64> {
    let a = observable_a(spec.m(), spec.m_prime(), sigma.dim())?;
    let mean = expectation(sigma, &a)?;
    let second = expectation(sigma, &a.squared())?;
    let generator: Vec<f64> = (0..sigma.dim()).map(|n| n as f64).collect();
    let slope = phase_derivative(sigma, &a, &generator, -1.0)?;
    let delta = spec.delta() as f64;
    // ⟨A⟩ = Γcos(δφ) and slope = −δΓsin(δφ)
    Ok(propagated_error(mean, second, slope, delta))
}

/// `ΔA/|∂⟨A⟩/∂φ|` for an observable oscillating as `Γcos(δφ + c)`.
pub(crate) fn propagated_error(mean: f64, second: f64, slope: f64, delta: f64) -> f64 {
    let gamma = mean.hypot(slope / delta);
    if gamma < f64::MIN_POSITIVE || slope.abs() <= STATIONARY_TOLERANCE * delta * gamma {
        return f64::INFINITY;
    }
    let variance = second - mean * mean;
    if variance <= CONDITIONING_FLOOR * second {
        return f64::INFINITY;
    }
    variance.sqrt() / slope.abs()
}
