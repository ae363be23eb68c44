use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{check_finite, invalid, Error, Result};
use crate::fock::{DensityMatrix, TRACE_TOLERANCE};
use crate::protocol::ClosedFormRho;
use crate::states::pegg_barnett_phase;

/// Most negative probability tolerated before clipping to zero.
pub const PROBABILITY_FLOOR: f64 = -1e-12;

/// Outcome probabilities of the `M+1` Pegg-Barnett projectors.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    m: usize,
    probs: Vec<f64>,
    true_phi: f64,
}

impl OutcomeDistribution {
    /// Checks normalization and non-negativity, then clips rounding noise.
    pub fn new(m: usize, probs: Vec<f64>, true_phi: f64) -> Result<Self> {
        if probs.len() != m + 1 {
            return Err(Error::DimensionMismatch {
                expected: m + 1,
                actual: probs.len(),
            });
        }
        let true_phi = check_finite("true_phi", true_phi)?;
        if let Some(p) = probs.iter().find(|p| p.is_nan() || **p < PROBABILITY_FLOOR) {
            return Err(Error::Numerical(format!(
                "outcome probability {p:e} is negative"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::BadTrace { trace: total });
        }
        Ok(Self {
            m,
            probs: probs.into_iter().map(|p| p.max(0.0)).collect(),
            true_phi,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn true_phi(&self) -> f64 {
        self.true_phi
    }

    /// `Φ_l = 2πl/(M+1)`.
    pub fn outcome_phase(&self, l: usize) -> f64 {
        pegg_barnett_phase(self.m, l)
    }

    /// Point estimate of φ for outcome `l`: `−Φ_l` reduced to `[0, 2π)`.
    pub fn estimate(&self, l: usize) -> f64 {
        (-self.outcome_phase(l)).rem_euclid(TAU)
    }
}

/// Distance between two angles on the circle, in `[0, π]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    ((a - b + PI).rem_euclid(TAU) - PI).abs()
}

/// `p(l) = ⟨Φ_l|ρ|Φ_l⟩` over the block `|0⟩..|M⟩` of `rho`.
pub fn povm_distribution(
    rho: &DensityMatrix,
    m: usize,
    true_phi: f64,
) -> Result<OutcomeDistribution> {
    if rho.dim() < m + 1 {
        return Err(Error::DimensionMismatch {
            expected: m + 1,
            actual: rho.dim(),
        });
    }
    let levels = m + 1;
    let probs = (0..levels)
        .map(|l| {
            let phase = pegg_barnett_phase(m, l);
            let bra: Vec<Complex64> = (0..levels)
                .map(|n| Complex64::from_polar(1.0, -(n as f64) * phase))
                .collect();
            let mut acc = Complex64::new(0.0, 0.0);
            for n in 0..levels {
                for k in 0..levels {
                    acc += bra[n] * rho.get(n, k) * bra[k].conj();
                }
            }
            acc.re / levels as f64
        })
        .collect();
    OutcomeDistribution::new(m, probs, true_phi)
}

/// `p(l) = 2/(M+1)² Σ_{ij} weight_{ij} |Σ_n ω_n e^{−in(φ+Φ_l)}|²`, evaluated
/// term by term without forming the density matrix.
pub fn closed_form_p(m: usize, eta: f64, phi: f64) -> Result<OutcomeDistribution> {
    let phi = check_finite("phi", phi)?;
    let closed = ClosedFormRho::new(m, eta)?;
    let levels = (m + 1) as f64;
    let probs = (0..=m)
        .map(|l| {
            let angle = phi + pegg_barnett_phase(m, l);
            let sum: f64 = closed
                .terms()
                .iter()
                .map(|term| {
                    let overlap: Complex64 = term
                        .omega
                        .iter()
                        .enumerate()
                        .map(|(n, w)| Complex64::from_polar(*w, -(n as f64) * angle))
                        .sum();
                    term.weight * overlap.norm_sqr()
                })
                .sum();
            2.0 * sum / (levels * levels)
        })
        .collect();
    OutcomeDistribution::new(m, probs, phi)
}

/// `√(Σ_l p(l) d(φ̂_l, φ)²)` with `φ̂_l = −Φ_l`.
pub fn circular_rms(dist: &OutcomeDistribution) -> f64 {
    dist.probs
        .iter()
        .enumerate()
        .map(|(l, p)| p * circular_distance(dist.estimate(l), dist.true_phi).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// RMS spread of the estimates about their circular mean direction instead of
/// about the true phase.
pub fn circular_rms_about_mean(dist: &OutcomeDistribution) -> f64 {
    let resultant: Complex64 = dist
        .probs
        .iter()
        .enumerate()
        .map(|(l, p)| Complex64::from_polar(*p, dist.estimate(l)))
        .sum();
    if resultant.norm() == 0.0 {
        return circular_rms(dist);
    }
    let mean = resultant.arg();
    dist.probs
        .iter()
        .enumerate()
        .map(|(l, p)| p * circular_distance(dist.estimate(l), mean).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Diagonal sums `c_d = Σ_{n−m=d} ρ_{nm}` of a round-trip output at φ = 0.
///
/// A round-trip output at phase φ is `apply_phase(ρ₀, s·φ)` for a fixed sign
/// `s`, so every outcome probability is a trigonometric polynomial in φ with
/// these coefficients. Scanning φ then costs `O(M²)` per point.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseProfile {
    m: usize,
    sign: f64,
    /// `c_d` for `d = 0..=M`; negative offsets are the conjugates.
    diagonals: Vec<Complex64>,
}

impl PhaseProfile {
    pub fn new(rho_at_zero: &DensityMatrix, m: usize, sign: f64) -> Result<Self> {
        if rho_at_zero.dim() < m + 1 {
            return Err(Error::DimensionMismatch {
                expected: m + 1,
                actual: rho_at_zero.dim(),
            });
        }
        if !sign.is_finite() {
            return Err(invalid("sign", "must be finite"));
        }
        let diagonals = (0..=m)
            .map(|d| (0..=m - d).map(|k| rho_at_zero.get(k + d, k)).sum())
            .collect();
        Ok(Self { m, sign, diagonals })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `⟨e^{iΦ}⟩` of the continuous phase distribution: the first
    /// sub-diagonal sum `Σ_n ρ_{n+1,n}` (φ-independent up to a unit factor).
    pub fn first_diagonal(&self) -> Complex64 {
        self.diagonals.get(1).copied().unwrap_or_default()
    }

    /// Outcome distribution at interferometric phase `phi`.
    pub fn distribution(&self, phi: f64) -> Result<OutcomeDistribution> {
        let levels = self.m + 1;
        let probs = (0..levels)
            .map(|l| {
                let x = self.sign * phi - pegg_barnett_phase(self.m, l);
                let step = Complex64::from_polar(1.0, x);
                let mut z = Complex64::new(1.0, 0.0);
                let mut acc = self.diagonals[0].re;
                for c in &self.diagonals[1..] {
                    z *= step;
                    acc += 2.0 * (c * z).re;
                }
                acc / levels as f64
            })
            .collect();
        OutcomeDistribution::new(self.m, probs, phi)
    }

    pub fn rms(&self, phi: f64) -> Result<f64> {
        Ok(circular_rms(&self.distribution(phi)?))
    }
}
