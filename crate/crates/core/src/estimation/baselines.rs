//! Reference curves: shot noise, Heisenberg scaling and the lossy two-mode
//! NOON state.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::mm::propagated_error;
use super::optimize::{minimize_over_phase, PhaseMinimum};
use crate::error::{check_eta, invalid, Result};
use crate::fock::{loss_channel, DensityMatrix, KrausChannel, Observable};
use crate::states::noon_state;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Baselines {
    /// `1/√(Nη)`.
    pub shot_noise: f64,
    /// `1/N`.
    pub heisenberg: f64,
    /// Best error-propagation figure of the NOON state with loss `η` per arm.
    pub noon_error: f64,
}

pub fn baselines(n: f64, eta: f64) -> Result<Baselines> {
    if !(n.is_finite() && n >= 1.0) {
        return Err(invalid("n", format!("need N ≥ 1, got {n}")));
    }
    let eta = check_eta("eta", eta)?;
    Ok(Baselines {
        shot_noise: (n * eta).sqrt().recip(),
        heisenberg: n.recip(),
        noon_error: noon_error_closed(n, eta),
    })
}

/// `1/(N η^{N/2})`.
///
/// Only the no-loss branch keeps the `|N,0⟩⟨0,N|` coherence, so
/// `⟨A₂⟩ = η^N cos(Nφ)` and `⟨A₂²⟩ = η^N`; the error propagation figure
/// `√(η^N − η^{2N}cos²)/(Nη^N|sin|)` is smallest at `|sin(Nφ)| = 1`.
pub fn noon_error_closed(n: f64, eta: f64) -> f64 {
    (n * eta.powf(n / 2.0)).recip()
}

/// `A₂ = |N,0⟩⟨0,N| + |0,N⟩⟨N,0|` on the `(N+1)²` product space.
pub fn noon_observable(n: usize) -> Observable {
    let side = n + 1;
    let mut a = DMatrix::zeros(side * side, side * side);
    let (hi, lo) = (n * side, n);
    a[(hi, lo)] = Complex64::new(1.0, 0.0);
    a[(lo, hi)] = Complex64::new(1.0, 0.0);
    Observable::new(a).expect("0/1 symmetric matrix is Hermitian")
}

/// Per-arm loss on both modes of the `(N+1)²` product space.
pub fn two_mode_loss(eta: f64, n: usize) -> Result<KrausChannel> {
    let arm = loss_channel(eta, n + 1)?;
    arm.tensor(&arm)
}

/// Phase `e^{iφ n̂₁}` on the first mode of a two-mode density matrix.
pub fn two_mode_phase(rho: &DensityMatrix, phi: f64, side: usize) -> Result<DensityMatrix> {
    let first_mode = |idx: usize| (idx / side) as f64;
    let elems = DMatrix::from_fn(rho.dim(), rho.dim(), |r, c| {
        rho.get(r, c) * Complex64::from_polar(1.0, (first_mode(r) - first_mode(c)) * phi)
    });
    DensityMatrix::new(elems)
}

/// Minimum over φ of `ΔA₂/|∂⟨A₂⟩/∂φ|` for the NOON state, from an explicit
/// Kraus evolution of the two-mode density matrix.
///
/// Loss commutes with the phase, so the state is evolved once at φ = 0. Each
/// element then only rotates, `ρ_rc(φ) = ρ_rc(0) e^{i(n₁(r)−n₁(c))φ}`, and the
/// traces against `A₂` and `A₂²` reduce to a few oscillating terms.
pub fn noon_error_brute_force(n: usize, eta: f64, grid_points: usize) -> Result<PhaseMinimum> {
    let side = n + 1;
    let rho = two_mode_loss(eta, n)?.apply(&noon_state(n)?.to_density()?)?;
    let a = noon_observable(n);
    let generator: Vec<f64> = (0..side * side).map(|idx| (idx / side) as f64).collect();
    let mean = Oscillation::new(&rho, &a, &generator);
    let second = Oscillation::new(&rho, &a.squared(), &generator);
    let error_at = |phi: f64| {
        let (m, slope) = mean.at(phi);
        propagated_error(m, second.at(phi).0, slope, n as f64)
    };
    minimize_over_phase(error_at, TAU / n as f64, grid_points)
}

/// `Tr[O ρ(φ)]` as a sum of `c·e^{iωφ}` over the nonzero products `O_cr ρ_rc`.
struct Oscillation {
    terms: Vec<(Complex64, f64)>,
}

impl Oscillation {
    fn new(rho: &DensityMatrix, obs: &Observable, generator: &[f64]) -> Self {
        let dim = rho.dim();
        let mut terms = Vec::new();
        for r in 0..dim {
            for c in 0..dim {
                let coef = obs.matrix()[(c, r)] * rho.get(r, c);
                if coef != Complex64::new(0.0, 0.0) {
                    terms.push((coef, generator[r] - generator[c]));
                }
            }
        }
        Self { terms }
    }

    /// Value and φ-derivative at `phi`.
    fn at(&self, phi: f64) -> (f64, f64) {
        self.terms.iter().fold((0.0, 0.0), |(v, d), (coef, omega)| {
            let z = coef * Complex64::from_polar(1.0, omega * phi);
            (v + z.re, d - omega * z.im)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::optimize::DEFAULT_PHASE_GRID;

    #[test]
    fn arithmetic_examples() {
        let b = baselines(20.0, 0.9).unwrap();
        assert!((b.shot_noise - 18f64.sqrt().recip()).abs() < 1e-15);
        assert!((b.shot_noise - 0.2357).abs() < 1e-4);
        assert_eq!(b.heisenberg, 0.05);
        for n in 1..30 {
            assert!((baselines(n as f64, 1.0).unwrap().noon_error - 1.0 / n as f64).abs() < 1e-15);
        }
        assert!((noon_error_closed(1.0, 0.64) - 1.25).abs() < 1e-15);
    }

    #[test]
    fn baselines_reject_bad_input() {
        assert!(baselines(0.5, 0.9).is_err());
        assert!(baselines(2.0, 0.0).is_err());
        assert!(baselines(f64::NAN, 0.9).is_err());
    }

    #[test]
    fn single_photon_brute_force() {
        for eta in [0.3, 0.7, 1.0] {
            let min = noon_error_brute_force(1, eta, DEFAULT_PHASE_GRID).unwrap();
            assert!(
                (min.value - eta.sqrt().recip()).abs() < 1e-9,
                "eta={eta}: {min:?}"
            );
        }
    }

    #[test]
    fn oscillation_matches_direct_traces() {
        use crate::estimation::mm::phase_derivative;
        use crate::fock::expectation;
        let n = 3;
        let side = n + 1;
        let rho = two_mode_loss(0.8, n)
            .unwrap()
            .apply(&noon_state(n).unwrap().to_density().unwrap())
            .unwrap();
        let a = noon_observable(n);
        let generator: Vec<f64> = (0..side * side).map(|idx| (idx / side) as f64).collect();
        let osc = Oscillation::new(&rho, &a, &generator);
        for phi in [0.0, 0.4, 2.2] {
            let shifted = two_mode_phase(&rho, phi, side).unwrap();
            let (value, slope) = osc.at(phi);
            assert!((value - expectation(&shifted, &a).unwrap()).abs() < 1e-14);
            assert!(
                (slope - phase_derivative(&shifted, &a, &generator, 1.0).unwrap()).abs() < 1e-13
            );
        }
    }

    #[test]
    fn loss_commutes_with_phase_on_two_modes() {
        let n = 3;
        let rho = noon_state(n).unwrap().to_density().unwrap();
        let loss = two_mode_loss(0.8, n).unwrap();
        let phi = 0.9;
        let a = loss
            .apply(&two_mode_phase(&rho, phi, n + 1).unwrap())
            .unwrap();
        let b = two_mode_phase(&loss.apply(&rho).unwrap(), phi, n + 1).unwrap();
        assert!(a.max_abs_diff(&b).unwrap().0 < 1e-14);
    }
}
