//! The single-mode round trip: phase and loss in the probe arm, the
//! permutation `U`, then phase and loss in the reference arm.
//!
//! [`roundtrip_oracle`] evolves a state through explicit Kraus sums and is the
//! ground truth. [`ClosedFormRho`] and [`ClosedFormSigma`] evaluate the
//! analytic single-round outputs for the optimal phase state and the M&M
//! state; [`validate_closed_forms`] compares the two routes.
//!
//! Closed-form matrices are labeled in the basis after `U`, so the coherence
//! between `|n⟩` and `|m⟩` carries `e^{iφ(m−n)}`.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{check_eta, check_finite, invalid, Result};
use crate::fock::{
    binomial, check_dims, loss_channel, CMatrix, DensityMatrix, FockVector, KrausChannel,
    PermutationUnitary, PhaseShift, PhaseShiftable,
};
use crate::states::{mm_state, optimal_phase_state, MmStateSpec, OptimalPhaseStateSpec};

/// Elementwise agreement required between closed forms and the oracle.
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-10;

/// Parameters of the round trip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundTripConfig {
    /// Interferometric phase φ.
    pub phi: f64,
    /// Absolute phase ϑ picked up in either arm.
    pub theta: f64,
    /// Transmissivity of the probe arm.
    pub eta1: f64,
    /// Transmissivity of the reference arm.
    pub eta2: f64,
    /// Largest Fock index reversed by `U`.
    pub m: usize,
    pub rounds: usize,
}

impl RoundTripConfig {
    /// One round with the same transmissivity in both arms and `ϑ = 0`.
    pub fn symmetric(m: usize, eta: f64, phi: f64) -> Self {
        Self {
            phi,
            theta: 0.0,
            eta1: eta,
            eta2: eta,
            m,
            rounds: 1,
        }
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_rounds(mut self, rounds: usize) -> Self {
        self.rounds = rounds;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_finite("phi", self.phi)?;
        check_finite("theta", self.theta)?;
        check_eta("eta1", self.eta1)?;
        check_eta("eta2", self.eta2)?;
        if self.rounds < 1 {
            return Err(invalid("rounds", "at least one round trip is required"));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.m + 1
    }

    /// Single-round map as one composed Kraus channel.
    pub fn single_round_channel(&self) -> Result<KrausChannel> {
        self.validate()?;
        let dim = self.dim();
        let probe_phase = KrausChannel::unitary(phase_matrix(self.phi + self.theta, dim))?;
        let reference_phase = KrausChannel::unitary(phase_matrix(self.theta, dim))?;
        let u = KrausChannel::unitary(PermutationUnitary::new(self.m, dim)?.to_matrix())?;
        probe_phase
            .then(&loss_channel(self.eta1, dim)?)?
            .then(&u)?
            .then(&reference_phase)?
            .then(&loss_channel(self.eta2, dim)?)
    }
}

/// Coefficient `s` such that the `R`-round output at phase φ equals the
/// output at φ = 0 shifted by `apply_phase(·, s·φ)`.
///
/// Each pass adds `+φ` to the phase carried by a coherence and `U` reverses
/// its sign, so odd round counts leave `−φ` and even ones cancel it.
pub fn output_phase_sign(rounds: usize) -> f64 {
    if rounds % 2 == 1 {
        -1.0
    } else {
        0.0
    }
}

fn phase_matrix(phi: f64, dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            Complex64::from_polar(1.0, r as f64 * phi)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Evolves `|input⟩⟨input|` through `cfg.rounds` round trips, each
/// `phase(φ+ϑ) → loss(η₁) → U → phase(ϑ) → loss(η₂)`.
pub fn roundtrip_oracle(input: &FockVector, cfg: &RoundTripConfig) -> Result<DensityMatrix> {
    cfg.validate()?;
    check_dims(cfg.dim(), input.dim())?;
    let dim = cfg.dim();
    let probe_phase = PhaseShift::new(cfg.phi + cfg.theta)?;
    let reference_phase = PhaseShift::new(cfg.theta)?;
    let probe_loss = loss_channel(cfg.eta1, dim)?;
    let reference_loss = loss_channel(cfg.eta2, dim)?;
    let u = PermutationUnitary::new(cfg.m, dim)?;

    let mut rho = input.to_density();
    for _ in 0..cfg.rounds {
        rho = probe_loss.apply(&rho.phase_shifted(probe_phase))?;
        rho = u.apply_density(&rho)?;
        rho = reference_loss.apply(&rho.phase_shifted(reference_phase))?;
    }
    Ok(rho)
}

/// One `(i, j)` term of the optimal-state output: `i` photons lost in the
/// probe arm, `j` in the reference arm.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoTerm {
    pub lost_probe: usize,
    pub lost_reference: usize,
    /// `(1−η)^{i+j} η^{M−j}`.
    pub weight: f64,
    /// `ω_k` for `k` in `max(0, i−j)..=M−j`, zero elsewhere.
    pub omega: Vec<f64>,
}

/// Analytic single-round output of the optimal phase state with equal
/// transmissivity in both arms.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormRho {
    m: usize,
    eta: f64,
    terms: Vec<RhoTerm>,
}

impl ClosedFormRho {
    pub fn new(m: usize, eta: f64) -> Result<Self> {
        let spec = OptimalPhaseStateSpec::new(m)?;
        let eta = check_eta("eta", eta)?;
        let m = spec.m();
        let levels = (m + 1) as f64;
        let mut terms = Vec::new();
        for i in 0..=m {
            for j in 0..=m {
                let weight = (1.0 - eta).powi((i + j) as i32) * eta.powi((m - j) as i32);
                if weight == 0.0 {
                    continue;
                }
                let lo = i.saturating_sub(j);
                let hi = m - j;
                let mut omega = vec![0.0; m + 1];
                for (k, w) in omega.iter_mut().enumerate().take(hi + 1).skip(lo) {
                    // photons present before the probe-arm loss
                    let before = m - k - j + i;
                    *w = (binomial((k + j) as u64, j as u64) * binomial(before as u64, i as u64))
                        .sqrt()
                        * (std::f64::consts::PI * (before as f64 + 0.5) / levels).sin();
                }
                terms.push(RhoTerm {
                    lost_probe: i,
                    lost_reference: j,
                    weight,
                    omega,
                });
            }
        }
        Ok(Self { m, eta, terms })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn terms(&self) -> &[RhoTerm] {
        &self.terms
    }

    /// `2/(M+1) Σ_{ij} weight Σ_{nm} ω_n ω_m e^{iφ(m−n)} |n⟩⟨m|`.
    pub fn density(&self, phi: f64) -> Result<DensityMatrix> {
        let phi = check_finite("phi", phi)?;
        let dim = self.m + 1;
        let mut real = nalgebra::DMatrix::<f64>::zeros(dim, dim);
        for term in &self.terms {
            for (n, wn) in term.omega.iter().enumerate() {
                if *wn == 0.0 {
                    continue;
                }
                for (m, wm) in term.omega.iter().enumerate() {
                    real[(n, m)] += term.weight * wn * wm;
                }
            }
        }
        let scale = 2.0 / dim as f64;
        let elems = CMatrix::from_fn(dim, dim, |n, m| {
            Complex64::from_polar(scale * real[(n, m)], phi * (m as f64 - n as f64))
        });
        DensityMatrix::new(elems)?.debug_check_positive()
    }
}

pub fn closed_form_rho(m: usize, eta: f64, phi: f64) -> Result<DensityMatrix> {
    ClosedFormRho::new(m, eta)?.density(phi)
}

/// Analytic single-round output of the M&M state `(|M⟩+|M′⟩)/√2` with equal
/// transmissivity in both arms, in terms of the coefficient lists α, β, γ.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormSigma {
    spec: MmStateSpec,
    eta: f64,
    /// `α_j` for `j = −δ..=M′`, stored at `j + δ`.
    alpha: Vec<f64>,
    /// `β_j` for `j = 0..=M`.
    beta: Vec<f64>,
    /// `γ_j` for `j = 0..=M′`.
    gamma: Vec<f64>,
}

impl ClosedFormSigma {
    pub fn new(spec: MmStateSpec, eta: f64) -> Result<Self> {
        let eta = check_eta("eta", eta)?;
        let (m, mp, delta) = (spec.m() as i64, spec.m_prime() as i64, spec.delta() as i64);
        // f_ij = (1−η)^{2i−j} η^{M−i+j}
        let f =
            |i: i64, j: i64| (1.0 - eta).powi((2 * i - j) as i32) * eta.powi((m - i + j) as i32);
        let c = |n: i64, k: i64| {
            if k < 0 || n < 0 {
                0.0
            } else {
                binomial(n as u64, k as u64)
            }
        };

        let alpha = (-delta..=mp)
            .map(|j| {
                (j.max(0)..=mp)
                    .map(|i| f(i, j) * c(mp, i) * c(i + delta, i - j) / 2.0)
                    .sum()
            })
            .collect();
        let beta = (0..=m)
            .map(|j| (j..=m).map(|i| f(i, j) * c(m, i) * c(i, j) / 2.0).sum())
            .collect();
        let gamma = (0..=mp)
            .map(|j| {
                (j..=mp)
                    .map(|i| f(i, j) * (c(mp, i) * c(m, i) * c(i + delta, i - j) * c(i, j)).sqrt())
                    .sum()
            })
            .collect();
        Ok(Self {
            spec,
            eta,
            alpha,
            beta,
            gamma,
        })
    }

    pub fn spec(&self) -> MmStateSpec {
        self.spec
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `α_j`, zero outside `−δ..=M′`.
    pub fn alpha(&self, j: i64) -> f64 {
        let delta = self.spec.delta() as i64;
        usize::try_from(j + delta)
            .ok()
            .and_then(|idx| self.alpha.get(idx).copied())
            .unwrap_or(0.0)
    }

    /// `β_j`, zero outside `0..=M`.
    pub fn beta(&self, j: i64) -> f64 {
        usize::try_from(j)
            .ok()
            .and_then(|idx| self.beta.get(idx).copied())
            .unwrap_or(0.0)
    }

    /// `γ_j`, zero outside `0..=M′`.
    pub fn gamma(&self, j: i64) -> f64 {
        usize::try_from(j)
            .ok()
            .and_then(|idx| self.gamma.get(idx).copied())
            .unwrap_or(0.0)
    }

    /// `Θ = Σ_{k=0}^{M′} α_k + α_{k−δ} + β_k + β_{k+δ}`.
    pub fn theta_sum(&self) -> f64 {
        let delta = self.spec.delta() as i64;
        (0..=self.spec.m_prime() as i64)
            .map(|k| self.alpha(k) + self.alpha(k - delta) + self.beta(k) + self.beta(k + delta))
            .sum()
    }

    /// `Γ = Σ_{k=0}^{M′} γ_k`.
    pub fn gamma_sum(&self) -> f64 {
        self.gamma.iter().sum()
    }

    pub fn density(&self, phi: f64) -> Result<DensityMatrix> {
        let phi = check_finite("phi", phi)?;
        let dim = self.spec.m() + 1;
        let delta = self.spec.delta();
        let mut elems = CMatrix::zeros(dim, dim);
        for (idx, a) in self.alpha.iter().enumerate() {
            // idx = j + δ
            elems[(idx, idx)] += Complex64::new(*a, 0.0);
        }
        for (j, b) in self.beta.iter().enumerate() {
            elems[(j, j)] += Complex64::new(*b, 0.0);
        }
        let down = Complex64::from_polar(0.5, -(delta as f64) * phi);
        for (j, g) in self.gamma.iter().enumerate() {
            elems[(j + delta, j)] += down * *g;
            elems[(j, j + delta)] += down.conj() * *g;
        }
        DensityMatrix::new(elems)?.debug_check_positive()
    }
}

pub fn closed_form_sigma(spec: MmStateSpec, eta: f64, phi: f64) -> Result<DensityMatrix> {
    ClosedFormSigma::new(spec, eta)?.density(phi)
}

/// Which analytic form a validation cell checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    Rho,
    Sigma {
        m_prime: usize,
    },
    /// NOON error `1/(Nη^{N/2})` against a two-mode Kraus evolution; `m` holds N.
    Noon,
}

/// Comparison of one closed-form instance against the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationCell {
    pub form: ClosedForm,
    pub m: usize,
    pub eta: f64,
    pub phi: f64,
    /// Largest elementwise modulus of the difference; `inf` when a route failed.
    pub max_dev: f64,
    pub worst_element: (usize, usize),
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub cells: Vec<ValidationCell>,
    pub tolerance: f64,
}

/// Absolute phase fed to the oracle during validation; any value must do.
const VALIDATION_THETA: f64 = 0.7;

/// Compares both closed forms against [`roundtrip_oracle`] for every
/// `M ≤ max_m` (and every `M′ < M` for σ) on the given grids.
pub fn validate_closed_forms(max_m: usize, eta_grid: &[f64], phi_grid: &[f64]) -> ValidationReport {
    let mut jobs = Vec::new();
    for m in 1..=max_m {
        for &eta in eta_grid {
            for &phi in phi_grid {
                jobs.push((ClosedForm::Rho, m, eta, phi));
                for m_prime in 0..m {
                    jobs.push((ClosedForm::Sigma { m_prime }, m, eta, phi));
                }
            }
        }
    }
    let cells = jobs
        .into_par_iter()
        .map(|(form, m, eta, phi)| validate_cell(form, m, eta, phi))
        .collect();
    ValidationReport {
        cells,
        tolerance: CLOSED_FORM_TOLERANCE,
    }
}

fn validate_cell(form: ClosedForm, m: usize, eta: f64, phi: f64) -> ValidationCell {
    let compare = || -> Result<(f64, (usize, usize))> {
        let cfg = RoundTripConfig::symmetric(m, eta, phi).with_theta(VALIDATION_THETA);
        let (closed, input) = match form {
            ClosedForm::Rho => (closed_form_rho(m, eta, phi)?, optimal_phase_state(m)?),
            ClosedForm::Sigma { m_prime } => {
                let spec = MmStateSpec::new(m, m_prime)?;
                (closed_form_sigma(spec, eta, phi)?, mm_state(spec)?)
            }
            ClosedForm::Noon => {
                return Err(invalid(
                    "form",
                    "NOON cells are not compared against the round trip",
                ))
            }
        };
        let oracle = roundtrip_oracle(&input, &cfg)?;
        closed.max_abs_diff(&oracle)
    };
    let (max_dev, worst_element, error) = match compare() {
        Ok((dev, at)) => (dev, at, None),
        Err(e) => (f64::INFINITY, (0, 0), Some(e.to_string())),
    };
    ValidationCell {
        form,
        m,
        eta,
        phi,
        max_dev,
        worst_element,
        error,
    }
}

impl ValidationReport {
    pub fn worst(&self) -> Option<&ValidationCell> {
        self.cells
            .iter()
            .max_by(|a, b| a.max_dev.total_cmp(&b.max_dev))
    }

    pub fn max_dev(&self) -> f64 {
        self.worst().map_or(0.0, |c| c.max_dev)
    }

    pub fn passed(&self) -> bool {
        self.cells
            .iter()
            .all(|c| c.error.is_none() && c.max_dev < self.tolerance)
    }

    /// `key=value` lines: `max_dev`, `argmax_m`, `argmax_eta`, `argmax_phi`, `status`.
    pub fn to_key_values(&self) -> String {
        let status = if self.passed() { "pass" } else { "fail" };
        match self.worst() {
            Some(w) => format!(
                "max_dev={:e}\nargmax_m={}\nargmax_eta={}\nargmax_phi={}\nstatus={status}\n",
                w.max_dev, w.m, w.eta, w.phi
            ),
            None => format!("max_dev=0\nargmax_m=\nargmax_eta=\nargmax_phi=\nstatus={status}\n"),
        }
    }

    /// Human-readable table with one line per cell.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<6} {:>4} {:>4} {:>8} {:>8} {:>12} {:>9}  note",
            "form", "M", "M'", "eta", "phi", "max_dev", "at"
        );
        for c in &self.cells {
            let (name, mp) = match c.form {
                ClosedForm::Rho => ("rho", "-".to_string()),
                ClosedForm::Sigma { m_prime } => ("sigma", m_prime.to_string()),
                ClosedForm::Noon => ("noon", "-".to_string()),
            };
            let _ = writeln!(
                out,
                "{:<6} {:>4} {:>4} {:>8} {:>8} {:>12.3e} {:>9}  {}",
                name,
                c.m,
                mp,
                c.eta,
                c.phi,
                c.max_dev,
                format!("({},{})", c.worst_element.0, c.worst_element.1),
                c.error.as_deref().unwrap_or(if c.max_dev < self.tolerance {
                    "ok"
                } else {
                    "FAIL"
                })
            );
        }
        let _ = writeln!(
            out,
            "worst deviation {:.3e} (tolerance {:.0e}): {}",
            self.max_dev(),
            self.tolerance,
            if self.passed() { "pass" } else { "fail" }
        );
        out
    }

    /// Writes the table to `table_path` and the key/value summary to `kv_path`.
    pub fn write(&self, table_path: &Path, kv_path: &Path) -> std::io::Result<()> {
        std::fs::write(table_path, self.to_table())?;
        std::fs::write(kv_path, self.to_key_values())
    }
}
