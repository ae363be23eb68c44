//! Input states and measurement vectors.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{check_finite, invalid, Error, Result};
use crate::fock::{DensityMatrix, FockVector, NORM_TOLERANCE};

/// Sine-amplitude state on `|0⟩..|M⟩`, mean photon number `M/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OptimalPhaseStateSpec {
    m: usize,
}

impl OptimalPhaseStateSpec {
    pub fn new(m: usize) -> Result<Self> {
        if m < 1 {
            return Err(invalid("m", "the optimal phase state needs M ≥ 1"));
        }
        Ok(Self { m })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.m as f64 / 2.0
    }
}

/// `√(2/(M+1)) Σ_{n=0}^{M} sin(π(n+½)/(M+1)) |n⟩` in dimension `M+1`.
pub fn optimal_phase_state(m: usize) -> Result<FockVector> {
    let spec = OptimalPhaseStateSpec::new(m)?;
    let levels = (spec.m + 1) as f64;
    let scale = (2.0 / levels).sqrt();
    let amps = (0..=spec.m)
        .map(|n| Complex64::new(scale * (PI * (n as f64 + 0.5) / levels).sin(), 0.0))
        .collect();
    FockVector::new(amps)
}

/// Two-component superposition `(|M⟩ + |M′⟩)/√2` with `M > M′ ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MmStateSpec {
    m: usize,
    m_prime: usize,
}

impl MmStateSpec {
    pub fn new(m: usize, m_prime: usize) -> Result<Self> {
        if m <= m_prime {
            return Err(invalid(
                "m",
                format!("need M > M′, got M={m}, M′={m_prime}"),
            ));
        }
        Ok(Self { m, m_prime })
    }

    /// The `(|2N⟩ + |0⟩)/√2` state with mean photon number `N`.
    pub fn no_state(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(invalid("n", "the NO state needs N ≥ 1"));
        }
        Self::new(2 * n, 0)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn m_prime(&self) -> usize {
        self.m_prime
    }

    /// `δ = M − M′`.
    pub fn delta(&self) -> usize {
        self.m - self.m_prime
    }

    /// `(M + M′)/2`.
    pub fn mean_photon_number(&self) -> f64 {
        (self.m + self.m_prime) as f64 / 2.0
    }
}

pub fn mm_state(spec: MmStateSpec) -> Result<FockVector> {
    let mut amps = vec![Complex64::new(0.0, 0.0); spec.m + 1];
    amps[spec.m] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amps[spec.m_prime] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    FockVector::new(amps)
}

/// Outcome phase `Φ_l = 2πl/(M+1)`.
pub fn pegg_barnett_phase(m: usize, l: usize) -> f64 {
    2.0 * PI * l as f64 / (m + 1) as f64
}

/// Phase state `Σ_{n=0}^{M} e^{inΦ} |n⟩ / √(M+1)`.
pub fn pegg_barnett_vector(m: usize, phi_value: f64) -> Result<FockVector> {
    let phi_value = check_finite("phi_value", phi_value)?;
    let scale = ((m + 1) as f64).sqrt().recip();
    let amps = (0..=m)
        .map(|n| Complex64::from_polar(scale, n as f64 * phi_value))
        .collect();
    FockVector::new(amps)
}

/// Pure state of two truncated modes, stored row-major over `|n₁⟩⊗|n₂⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeFockVector {
    dims: (usize, usize),
    amps: Vec<Complex64>,
}

impl TwoModeFockVector {
    pub fn new(dims: (usize, usize), amps: Vec<Complex64>) -> Result<Self> {
        if dims.0 == 0 || dims.1 == 0 {
            return Err(invalid("dims", "both modes need at least one level"));
        }
        if amps.len() != dims.0 * dims.1 {
            return Err(Error::DimensionMismatch {
                expected: dims.0 * dims.1,
                actual: amps.len(),
            });
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { dims, amps })
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    /// Flat index of `|n₁, n₂⟩`.
    pub fn index(&self, n1: usize, n2: usize) -> usize {
        n1 * self.dims.1 + n2
    }

    pub fn amp(&self, n1: usize, n2: usize) -> Complex64 {
        self.amps[self.index(n1, n2)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Density matrix on the flattened product space of dimension `D₁·D₂`.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let len = self.amps.len();
        DensityMatrix::new(DMatrix::from_fn(len, len, |r, c| {
            self.amps[r] * self.amps[c].conj()
        }))
    }
}

/// `(|N,0⟩ + |0,N⟩)/√2` in the `(N+1) × (N+1)` product space.
pub fn noon_state(n: usize) -> Result<TwoModeFockVector> {
    if n < 1 {
        return Err(invalid("n", "the NOON state needs N ≥ 1"));
    }
    let dims = (n + 1, n + 1);
    let mut amps = vec![Complex64::new(0.0, 0.0); dims.0 * dims.1];
    amps[n * dims.1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amps[n] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    TwoModeFockVector::new(dims, amps)
}
