mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use num_complex::Complex64;
use roundtrip_core::estimation::{
    circular_rms, closed_form_p, holevo_variance, noon_error_brute_force, observable_a,
    povm_distribution, OutcomeDistribution, DEFAULT_PHASE_GRID,
};
use roundtrip_core::fock::{apply_phase, expectation, loss_channel, FockVector};
use roundtrip_core::protocol::{
    closed_form_rho, closed_form_sigma, roundtrip_oracle, RoundTripConfig,
};
use roundtrip_core::states::{
    mm_state, optimal_phase_state, pegg_barnett_phase, pegg_barnett_vector, MmStateSpec,
};

#[test]
fn single_photon_loss_splits_populations() {
    for eta in [0.5, 0.63, 0.9] {
        let rho = FockVector::basis(1, 2).unwrap().to_density();
        let out = loss_channel(eta, 2).unwrap().apply(&rho).unwrap();
        assert!((out.get(0, 0).re - (1.0 - eta)).abs() < 1e-15);
        assert!((out.get(1, 1).re - eta).abs() < 1e-15);
        assert!(out.get(0, 1).norm() < 1e-15);
    }
}

#[test]
fn five_photon_survival_is_binomial() {
    let rho = FockVector::basis(5, 6).unwrap().to_density();
    let out = loss_channel(0.9, 6).unwrap().apply(&rho).unwrap();
    assert!((out.get(5, 5).re - 0.59049).abs() < 1e-14);
    for k in 0..=5 {
        let expected = common::choose(5, k) * 0.9f64.powi(k as i32) * 0.1f64.powi(5 - k as i32);
        assert!((out.get(k, k).re - expected).abs() < 1e-14);
    }
}

#[test]
fn optimal_state_m3_is_sine_shaped_and_symmetric() {
    let psi = optimal_phase_state(3).unwrap();
    let sines: Vec<f64> = [1.0, 3.0, 5.0, 7.0]
        .iter()
        .map(|k| (k * PI / 8.0).sin())
        .collect();
    let norm = sines.iter().map(|s| s * s).sum::<f64>().sqrt();
    for (n, s) in sines.iter().enumerate() {
        assert!((psi.amp(n).re - s / norm).abs() < 1e-15);
        assert!((psi.amp(n) - psi.amp(3 - n)).norm() < 1e-15);
    }
}

#[test]
fn state_family_parameters() {
    let no = MmStateSpec::no_state(6).unwrap();
    assert_eq!((no.m(), no.m_prime()), (12, 0));
    let psi = mm_state(no).unwrap();
    assert!(
        (psi.amp(12).re - FRAC_1_SQRT_2).abs() < 1e-15
            && (psi.amp(0).re - FRAC_1_SQRT_2).abs() < 1e-15
    );

    let fig3 = MmStateSpec::new(30, 10).unwrap();
    assert_eq!(fig3.delta(), 20);
    assert!((fig3.mean_photon_number() - 20.0).abs() < 1e-15);
    for n in 4..=30usize {
        let spec = MmStateSpec::new(2 * n - 3, 3).unwrap();
        assert!((spec.mean_photon_number() - n as f64).abs() < 1e-15);
    }
}

#[test]
fn pegg_barnett_states_are_orthonormal() {
    let m = 9;
    for l in 0..=m {
        let a = pegg_barnett_vector(m, pegg_barnett_phase(m, l)).unwrap();
        for k in 0..=m {
            let b = pegg_barnett_vector(m, pegg_barnett_phase(m, k)).unwrap();
            let expected = if l == k { 1.0 } else { 0.0 };
            assert!((a.inner(&b).unwrap() - expected).norm() < 1e-12);
        }
    }
}

#[test]
fn closed_forms_match_oracle_at_spec_points() {
    let rho = closed_form_rho(2, 0.9, 0.3).unwrap();
    let oracle = roundtrip_oracle(
        &optimal_phase_state(2).unwrap(),
        &RoundTripConfig::symmetric(2, 0.9, 0.3),
    )
    .unwrap();
    assert!(rho.max_abs_diff(&oracle).unwrap().0 < 1e-10);

    let spec = MmStateSpec::new(3, 1).unwrap();
    let sigma = closed_form_sigma(spec, 0.8, 0.5).unwrap();
    let oracle = roundtrip_oracle(
        &mm_state(spec).unwrap(),
        &RoundTripConfig::symmetric(3, 0.8, 0.5),
    )
    .unwrap();
    assert!(sigma.max_abs_diff(&oracle).unwrap().0 < 1e-10);

    for m in 1..=20 {
        for eta in [0.5, 0.9] {
            assert!((closed_form_rho(m, eta, 0.7).unwrap().trace() - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn lossless_mm_output_is_a_two_level_state() {
    // U maps |M⟩ → |0⟩ and |M′⟩ → |δ⟩; the probe phase leaves e^{−iδφ} on |δ⟩⟨0|
    let spec = MmStateSpec::new(7, 2).unwrap();
    let phi = 0.45;
    let sigma = closed_form_sigma(spec, 1.0, phi).unwrap();
    let d = spec.delta();
    for r in 0..=7 {
        for c in 0..=7 {
            let expected = match (r, c) {
                (0, 0) => Complex64::new(0.5, 0.0),
                (r, c) if r == d && c == d => Complex64::new(0.5, 0.0),
                (r, 0) if r == d => Complex64::from_polar(0.5, -(d as f64) * phi),
                (0, c) if c == d => Complex64::from_polar(0.5, d as f64 * phi),
                _ => Complex64::new(0.0, 0.0),
            };
            assert!((sigma.get(r, c) - expected).norm() < 1e-15, "({r},{c})");
        }
    }
    let a = observable_a(7, 2, 8).unwrap();
    assert!(
        (expectation(&closed_form_sigma(spec, 1.0, 0.0).unwrap(), &a).unwrap() - 1.0).abs() < 1e-15
    );
}

#[test]
fn single_qubit_pegg_barnett_distribution() {
    let plus = FockVector::new(vec![Complex64::new(FRAC_1_SQRT_2, 0.0); 2]).unwrap();
    for phi in [0.0, 0.4, 2.0, 5.5] {
        let rho = apply_phase(&plus.to_density(), phi).unwrap();
        let dist = povm_distribution(&rho, 1, phi).unwrap();
        for l in 0..2 {
            let expected = (1.0 + (phi - pegg_barnett_phase(1, l)).cos()) / 2.0;
            assert!(
                (dist.probs()[l] - expected).abs() < 1e-14,
                "phi={phi} l={l}"
            );
        }
    }
}

#[test]
fn closed_form_distribution_matches_matrix_route() {
    let closed = closed_form_p(4, 0.9, 0.2).unwrap();
    let direct = povm_distribution(&closed_form_rho(4, 0.9, 0.2).unwrap(), 4, 0.2).unwrap();
    for (a, b) in closed.probs().iter().zip(direct.probs()) {
        assert!((a - b).abs() < 1e-10);
    }
    assert!((closed.probs().iter().sum::<f64>() - 1.0).abs() < 1e-10);
}

#[test]
fn uniform_distribution_rms_tends_to_pi_over_root_three() {
    let m = 4000;
    let dist = OutcomeDistribution::new(m, vec![1.0 / (m + 1) as f64; m + 1], 0.0).unwrap();
    assert!((circular_rms(&dist) - PI / 3f64.sqrt()).abs() < 1e-3);
}

#[test]
fn holevo_moment_matches_quadrature() {
    // S = |∫ e^{iθ} P(θ) dθ| with P(θ) = ⟨θ|ρ|θ⟩/2π and |θ⟩ = Σ e^{inθ}|n⟩
    let rho = closed_form_rho(4, 0.9, 0.0).unwrap();
    let points = 2048;
    let mut moment = Complex64::new(0.0, 0.0);
    for q in 0..points {
        let theta = TAU * q as f64 / points as f64;
        let mut p = Complex64::new(0.0, 0.0);
        for n in 0..5 {
            for k in 0..5 {
                p += Complex64::from_polar(1.0, (k as f64 - n as f64) * theta) * rho.get(n, k);
            }
        }
        moment += Complex64::from_polar(1.0, theta) * p.re / points as f64;
    }
    let s = moment.norm();
    let expected = (s.powi(-2) - 1.0).sqrt();
    assert!((holevo_variance(&rho) - expected).abs() < 1e-8);
}

#[test]
fn noon_single_photon_error() {
    for eta in [0.25, 0.6, 0.95] {
        let min = noon_error_brute_force(1, eta, DEFAULT_PHASE_GRID).unwrap();
        assert!((min.value - eta.sqrt().recip()).abs() < 1e-9);
    }
    for n in 1..=8 {
        let min = noon_error_brute_force(n, 1.0, DEFAULT_PHASE_GRID).unwrap();
        assert!((min.value - 1.0 / n as f64).abs() < 1e-9);
    }
}
