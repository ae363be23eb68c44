//! Measurement statistics and phase-error figures.

mod baselines;
mod holevo;
mod mm;
mod optimize;
mod povm;

pub use baselines::{
    baselines, noon_error_brute_force, noon_error_closed, noon_observable, two_mode_loss,
    two_mode_phase, Baselines,
};
pub use holevo::{holevo_variance, phase_moment};
pub use mm::{
    mm_error, mm_error_closed, observable_a, phase_derivative, MmErrorInputs, STATIONARY_TOLERANCE,
};
pub use optimize::{
    average_over_phase, minimize_over_phase, scan_phase, PhaseAverage, PhaseMinimum, PhaseScan,
    DEFAULT_PHASE_GRID, REFINE_TOLERANCE,
};
pub use povm::{
    circular_distance, circular_rms, circular_rms_about_mean, closed_form_p, povm_distribution,
    OutcomeDistribution, PhaseProfile, PROBABILITY_FLOOR,
};
