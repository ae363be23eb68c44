use num_complex::Complex64;

use crate::fock::DensityMatrix;

/// Mean of `e^{iΦ}` under the continuous phase-state POVM.
///
/// With `|Φ⟩ = Σ_n e^{inΦ}|n⟩/√D` and measure `D dΦ/2π`, the outcome density is
/// `p(Φ) = (1/2π) Σ_{nm} ρ_{nm} e^{−i(n−m)Φ}`. Integrating against `e^{iΦ}`
/// keeps only `n − m = 1`, leaving `Σ_n ρ_{n+1,n}`.
pub fn phase_moment(rho: &DensityMatrix) -> Complex64 {
    (0..rho.dim().saturating_sub(1))
        .map(|n| rho.get(n + 1, n))
        .sum()
}

/// `(S⁻² − 1)^{1/2}` with `S = |⟨e^{iΦ}⟩|`; `+∞` when `S = 0`.
pub fn holevo_variance(rho: &DensityMatrix) -> f64 {
    holevo_from_sharpness(phase_moment(rho).norm())
}

pub(crate) fn holevo_from_sharpness(s: f64) -> f64 {
    if s == 0.0 {
        return f64::INFINITY;
    }
    // S ≤ 1 up to rounding
    (s.powi(-2) - 1.0).max(0.0).sqrt()
}
