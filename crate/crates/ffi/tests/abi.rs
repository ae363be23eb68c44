use std::ffi::CStr;
use std::ptr;

use roundtrip_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(rt_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn element(rho: *const RtDensityMatrix, r: usize, c: usize) -> (f64, f64) {
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(
        unsafe { rt_density_get(rho, r, c, &mut re, &mut im) },
        RtStatus::Ok
    );
    (re, im)
}

#[test]
fn optimal_state_round_trip_matches_closed_form() {
    unsafe {
        let mut psi = ptr::null_mut();
        assert_eq!(rt_optimal_phase_state(4, &mut psi), RtStatus::Ok);
        assert_eq!(rt_fock_vector_dim(psi), 5);

        let cfg = RtRoundTripConfig {
            phi: 0.3,
            theta: 0.7,
            eta1: 0.9,
            eta2: 0.9,
            m: 4,
            rounds: 1,
        };
        let mut oracle = ptr::null_mut();
        assert_eq!(rt_roundtrip_oracle(psi, cfg, &mut oracle), RtStatus::Ok);
        let mut closed = ptr::null_mut();
        assert_eq!(rt_closed_form_rho(4, 0.9, 0.3, &mut closed), RtStatus::Ok);

        let mut dev = f64::NAN;
        assert_eq!(
            rt_density_max_abs_diff(oracle, closed, &mut dev),
            RtStatus::Ok
        );
        assert!(dev < 1e-10, "{dev}");
        let mut trace = 0.0;
        assert_eq!(rt_density_trace(oracle, &mut trace), RtStatus::Ok);
        assert!((trace - 1.0).abs() < 1e-12);

        let mut probs = [0.0; 5];
        assert_eq!(
            rt_povm_distribution(oracle, 4, probs.as_mut_ptr(), 5),
            RtStatus::Ok
        );
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let mut rms = 0.0;
        assert_eq!(rt_circular_rms(oracle, 4, 0.3, &mut rms), RtStatus::Ok);
        assert!(rms > 0.0 && rms < std::f64::consts::PI);
        let mut holevo = 0.0;
        assert_eq!(rt_holevo_variance(oracle, &mut holevo), RtStatus::Ok);
        assert!(holevo.is_finite() && holevo > 0.0);

        rt_density_free(closed);
        rt_density_free(oracle);
        rt_fock_vector_free(psi);
    }
}

#[test]
fn mm_error_through_the_boundary() {
    unsafe {
        let mut sigma = ptr::null_mut();
        assert_eq!(
            rt_closed_form_sigma(9, 3, 1.0, 0.1, &mut sigma),
            RtStatus::Ok
        );
        assert_eq!(rt_density_dim(sigma), 10);
        let mut err = 0.0;
        assert_eq!(rt_mm_error(sigma, 9, 3, &mut err), RtStatus::Ok);
        assert!((err - 1.0 / 6.0).abs() < 1e-9);
        let mut closed = 0.0;
        assert_eq!(
            rt_mm_error_closed(1.0, 1.0, 6, 0.1, &mut closed),
            RtStatus::Ok
        );
        assert!((closed - 1.0 / 6.0).abs() < 1e-12);
        rt_density_free(sigma);
    }
}

#[test]
fn phase_shift_and_elements() {
    unsafe {
        let mut psi = ptr::null_mut();
        assert_eq!(rt_mm_state(2, 0, &mut psi), RtStatus::Ok);
        let mut rho = ptr::null_mut();
        assert_eq!(rt_fock_vector_to_density(psi, &mut rho), RtStatus::Ok);
        let mut shifted = ptr::null_mut();
        assert_eq!(
            rt_density_apply_phase(rho, 0.25, &mut shifted),
            RtStatus::Ok
        );
        let (re, im) = element(shifted, 2, 0);
        assert!((re - 0.5 * 0.5f64.cos()).abs() < 1e-15);
        assert!((im - 0.5 * 0.5f64.sin()).abs() < 1e-15);
        rt_density_free(shifted);
        rt_density_free(rho);
        rt_fock_vector_free(psi);
    }
}

#[test]
fn noon_error_matches_closed_form() {
    let mut out = 0.0;
    assert_eq!(unsafe { rt_noon_error(4.0, 0.9, &mut out) }, RtStatus::Ok);
    assert!((out - 1.0 / (4.0 * 0.81)).abs() < 1e-15);
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut psi = ptr::null_mut();
        assert_eq!(
            rt_optimal_phase_state(0, &mut psi),
            RtStatus::InvalidArgument
        );
        assert!(psi.is_null());
        assert!(!last_error().is_empty());

        assert_eq!(
            rt_optimal_phase_state(3, ptr::null_mut()),
            RtStatus::NullPointer
        );
        assert!(last_error().contains("null"));

        let mut rho = ptr::null_mut();
        assert_eq!(
            rt_closed_form_rho(3, 0.0, 0.1, &mut rho),
            RtStatus::InvalidArgument
        );

        let re = [1.0, 1.0];
        let im = [0.0, 0.0];
        let mut v = ptr::null_mut();
        assert_eq!(
            rt_fock_vector_new(re.as_ptr(), im.as_ptr(), 2, &mut v),
            RtStatus::NotPhysical
        );

        assert_eq!(rt_closed_form_rho(3, 0.9, 0.1, &mut rho), RtStatus::Ok);
        assert!(last_error().is_empty());
        let mut small = [0.0; 2];
        assert_eq!(
            rt_povm_distribution(rho, 3, small.as_mut_ptr(), 2),
            RtStatus::DimensionMismatch
        );
        let (mut a, mut b) = (0.0, 0.0);
        assert_eq!(
            rt_density_get(rho, 9, 0, &mut a, &mut b),
            RtStatus::InvalidArgument
        );
        let mut trace = 0.0;
        assert_eq!(
            rt_density_trace(ptr::null(), &mut trace),
            RtStatus::NullPointer
        );
        rt_density_free(rho);

        rt_density_free(ptr::null_mut());
        rt_fock_vector_free(ptr::null_mut());
        assert_eq!(rt_density_dim(ptr::null()), 0);
    }
}

#[test]
fn version_is_nul_terminated() {
    let v = unsafe { CStr::from_ptr(rt_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
