use crate::error::{invalid, Error, Result};

/// Coarse grid resolution per period.
pub const DEFAULT_PHASE_GRID: usize = 720;
/// Golden-section refinement stops once the bracket is narrower than this.
pub const REFINE_TOLERANCE: f64 = 1e-6;

/// Relative improvement over the best grid point that the refined point must
/// show; smaller gains are rounding noise in a flat minimum.
const REFINE_GAIN: f64 = 1e-12;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMinimum {
    pub phi: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseAverage {
    /// Mean over finite grid samples.
    pub mean: f64,
    /// Samples skipped because they were `+∞` (or NaN).
    pub excluded: usize,
    pub samples: usize,
}

/// Result of one pass over the phase grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseScan {
    pub minimum: PhaseMinimum,
    pub average: PhaseAverage,
}

fn grid(period: f64, points: usize) -> Result<impl Iterator<Item = f64>> {
    if !(period.is_finite() && period > 0.0) {
        return Err(invalid("period", format!("must be positive, got {period}")));
    }
    if points == 0 {
        return Err(invalid("grid_points", "must be positive"));
    }
    Ok((0..points).map(move |q| period * q as f64 / points as f64))
}

fn sanitize(value: f64) -> f64 {
    if value.is_nan() {
        f64::INFINITY
    } else {
        value
    }
}

/// Evaluates `error_fn` on `grid_points` equally spaced phases in
/// `[0, period)`, refines the best cell by golden-section search and averages
/// the finite grid samples. Evaluation order is fixed, so results are
/// reproducible bit for bit.
///
/// The refined point replaces the grid point only when it improves the value
/// beyond rounding, and the reported phase is wrapped into
/// `[−period/2, period/2)`.
pub fn scan_phase<F>(error_fn: F, period: f64, grid_points: usize) -> Result<PhaseScan>
where
    F: Fn(f64) -> f64,
{
    let mut best = PhaseMinimum {
        phi: 0.0,
        value: f64::INFINITY,
    };
    let mut sum = 0.0;
    let mut finite = 0usize;
    for phi in grid(period, grid_points)? {
        let value = sanitize(error_fn(phi));
        if value.is_finite() {
            sum += value;
            finite += 1;
        }
        if value < best.value {
            best = PhaseMinimum { phi, value };
        }
    }
    if finite == 0 {
        return Err(Error::Numerical(
            "error function is infinite on the whole phase grid".into(),
        ));
    }
    let step = period / grid_points as f64;
    let refined = golden_section(&error_fn, best.phi - step, best.phi + step);
    if refined.value < best.value * (1.0 - REFINE_GAIN) {
        best = refined;
    }
    best.phi -= period * (best.phi / period).round();
    if best.phi >= period / 2.0 {
        best.phi -= period;
    }
    Ok(PhaseScan {
        minimum: best,
        average: PhaseAverage {
            mean: sum / finite as f64,
            excluded: grid_points - finite,
            samples: grid_points,
        },
    })
}

pub fn minimize_over_phase<F>(error_fn: F, period: f64, grid_points: usize) -> Result<PhaseMinimum>
where
    F: Fn(f64) -> f64,
{
    Ok(scan_phase(error_fn, period, grid_points)?.minimum)
}

pub fn average_over_phase<F>(error_fn: F, period: f64, grid_points: usize) -> Result<PhaseAverage>
where
    F: Fn(f64) -> f64,
{
    Ok(scan_phase(error_fn, period, grid_points)?.average)
}

/// Golden-section search on `[lo, hi]`, returning the best point evaluated.
fn golden_section<F>(f: &F, mut lo: f64, mut hi: f64) -> PhaseMinimum
where
    F: Fn(f64) -> f64,
{
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = sanitize(f(x1));
    let mut f2 = sanitize(f(x2));
    let mut best = if f1 <= f2 {
        PhaseMinimum { phi: x1, value: f1 }
    } else {
        PhaseMinimum { phi: x2, value: f2 }
    };
    while hi - lo > REFINE_TOLERANCE {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = sanitize(f(x1));
            if f1 < best.value {
                best = PhaseMinimum { phi: x1, value: f1 };
            }
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = sanitize(f(x2));
            if f2 < best.value {
                best = PhaseMinimum { phi: x2, value: f2 };
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn finds_analytic_minimum() {
        let min = minimize_over_phase(|phi| 1.0 + phi.sin(), TAU, DEFAULT_PHASE_GRID).unwrap();
        assert!((min.phi + 0.5 * PI).abs() < 1e-5, "{min:?}");
        assert!(min.value.abs() < 1e-10);
    }

    #[test]
    fn argmin_is_wrapped_into_centered_window() {
        let period = 0.5;
        let min = minimize_over_phase(|phi| (TAU * (phi - 0.45) / period).cos() + 1.0, period, 100)
            .unwrap();
        assert!(
            (min.phi - (-0.3)).abs() < 1e-6 || (min.phi - 0.2).abs() < 1e-6,
            "{min:?}"
        );
        assert!((-period / 2.0..period / 2.0).contains(&min.phi));
    }

    #[test]
    fn exact_grid_minimum_is_kept() {
        let min = minimize_over_phase(|phi| 2.0 - phi.cos(), TAU, 720).unwrap();
        assert_eq!(min.phi, 0.0);
        assert_eq!(min.value, 1.0);
    }

    #[test]
    fn constant_function() {
        let scan = scan_phase(|_| 0.25, TAU, DEFAULT_PHASE_GRID).unwrap();
        assert_eq!(scan.minimum.value, 0.25);
        assert!((scan.average.mean - 0.25).abs() < 1e-15);
        assert_eq!(scan.average.excluded, 0);
    }

    #[test]
    fn infinite_points_are_excluded_from_average() {
        let scan = scan_phase(|phi| if phi == 0.0 { f64::INFINITY } else { 2.0 }, 1.0, 10).unwrap();
        assert_eq!(scan.average.excluded, 1);
        assert_eq!(scan.average.mean, 2.0);
        assert_eq!(scan.minimum.value, 2.0);
    }

    #[test]
    fn all_infinite_is_an_error() {
        assert!(minimize_over_phase(|_| f64::INFINITY, TAU, 16).is_err());
        assert!(minimize_over_phase(|_| f64::NAN, TAU, 16).is_err());
    }

    #[test]
    fn bad_grid_rejected() {
        assert!(minimize_over_phase(|x| x, 0.0, 10).is_err());
        assert!(minimize_over_phase(|x| x, TAU, 0).is_err());
    }

    #[test]
    fn noiseless_mm_minimum_on_reduced_period() {
        let delta = 4.0;
        let err = |phi: f64| {
            let s = (delta * phi).sin();
            if s.abs() < 1e-12 {
                f64::INFINITY
            } else {
                (1.0 - (delta * phi).cos().powi(2)).max(0.0).sqrt() / (delta * s.abs())
            }
        };
        let min = minimize_over_phase(err, TAU / delta, DEFAULT_PHASE_GRID).unwrap();
        assert!((min.value - 0.25).abs() < 1e-9);
    }
}
