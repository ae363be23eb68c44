use num_complex::Complex64;

use super::{check_dims, ln_binomial, CMatrix, DensityMatrix};
use crate::error::{check_eta, invalid, Error, Result};

/// Tolerance on `Σ K†K = I`, elementwise.
pub const COMPLETENESS_TOLERANCE: f64 = 1e-10;

/// A CPTP map given by a list of Kraus matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    kraus: Vec<CMatrix>,
}

impl KrausChannel {
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let dim = kraus
            .first()
            .map(|k| k.nrows())
            .ok_or_else(|| invalid("kraus", "at least one Kraus operator is required"))?;
        for k in &kraus {
            check_dims(dim, k.nrows())?;
            check_dims(dim, k.ncols())?;
        }
        let channel = Self { dim, kraus };
        let deviation = channel.completeness_deviation();
        if deviation > COMPLETENESS_TOLERANCE {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(channel)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            kraus: vec![CMatrix::identity(dim, dim)],
        }
    }

    /// Conjugation by a unitary matrix.
    pub fn unitary(u: CMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// Largest entry of `|Σ K†K − I|`.
    pub fn completeness_deviation(&self) -> f64 {
        let mut sum = CMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            sum += k.adjoint() * k;
        }
        sum -= CMatrix::identity(self.dim, self.dim);
        sum.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `next ∘ self`: the Kraus set `{N_j K_i}` with vanishing products dropped.
    pub fn then(&self, next: &KrausChannel) -> Result<Self> {
        check_dims(self.dim, next.dim)?;
        let mut kraus = Vec::with_capacity(self.kraus.len() * next.kraus.len());
        for n in &next.kraus {
            for k in &self.kraus {
                let product = n * k;
                if product.iter().any(|z| z.norm_sqr() > 0.0) {
                    kraus.push(product);
                }
            }
        }
        Self::new(kraus)
    }

    /// `self ⊗ other` on the product space, with basis index `a · other.dim + b`.
    pub fn tensor(&self, other: &KrausChannel) -> Result<Self> {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(a.kronecker(b));
            }
        }
        Self::new(kraus)
    }

    /// `Σ K ρ K†`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        check_dims(self.dim, rho.dim())?;
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            out += k * rho.matrix() * k.adjoint();
        }
        DensityMatrix::from_hermitian_part(out)?.debug_check_positive()
    }
}

pub fn apply_channel(rho: &DensityMatrix, ch: &KrausChannel) -> Result<DensityMatrix> {
    ch.apply(rho)
}

/// Photon loss with transmissivity `eta` on a mode truncated at `dim`.
///
/// `K_i |n⟩ = √C(n,i) (1−η)^{i/2} η^{(n−i)/2} |n−i⟩` for `i ≤ n`, which is the
/// number-basis form of `(η⁻¹−1)^{i/2} aⁱ η^{a†a/2} / √i!`. Kraus indices run
/// over `0..dim`; operators that vanish identically (all `i > 0` at `η = 1`)
/// are dropped.
pub fn loss_channel(eta: f64, dim: usize) -> Result<KrausChannel> {
    let eta = check_eta("eta", eta)?;
    if dim == 0 {
        return Err(invalid("dim", "must be positive"));
    }
    let ln_eta = eta.ln();
    let ln_loss = (1.0 - eta).ln();
    let mut kraus = Vec::with_capacity(dim);
    for i in 0..dim {
        if i > 0 && eta == 1.0 {
            break;
        }
        let mut k = CMatrix::zeros(dim, dim);
        for n in i..dim {
            let lost = if i == 0 { 0.0 } else { i as f64 * ln_loss };
            let kept = if n == i { 0.0 } else { (n - i) as f64 * ln_eta };
            let amp = (0.5 * (ln_binomial(n as u64, i as u64) + lost + kept)).exp();
            k[(n - i, n)] = Complex64::new(amp, 0.0);
        }
        kraus.push(k);
    }
    KrausChannel::new(kraus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{binomial, FockVector};

    #[test]
    fn lossless_channel_is_identity() {
        let ch = loss_channel(1.0, 6).unwrap();
        assert_eq!(ch.kraus().len(), 1);
        assert_eq!(ch.kraus()[0], CMatrix::identity(6, 6));
    }

    #[test]
    fn single_photon_kraus_elements() {
        // K_0|1⟩ = η^{a†a/2}|1⟩ = √η|1⟩ and K_1|1⟩ = (η⁻¹−1)^{1/2} a √η|1⟩ = √(1−η)|0⟩
        let eta: f64 = 0.63;
        let ch = loss_channel(eta, 2).unwrap();
        let one = FockVector::basis(1, 2).unwrap();
        let v = nalgebra::DVector::from_column_slice(one.amps());
        let k0 = &ch.kraus()[0] * &v;
        let k1 = &ch.kraus()[1] * &v;
        assert!((k0[1].re - eta.sqrt()).abs() < 1e-15 && k0[0].norm() == 0.0);
        assert!((k1[0].re - (1.0 - eta).sqrt()).abs() < 1e-15 && k1[1].norm() == 0.0);
    }

    #[test]
    fn five_photons_follow_binomial_survival() {
        let eta: f64 = 0.9;
        let rho = FockVector::basis(5, 6).unwrap().to_density();
        let out = apply_channel(&rho, &loss_channel(eta, 6).unwrap()).unwrap();
        let pops = out.populations();
        assert!((pops[5] - 0.59049).abs() < 1e-14);
        for (k, p) in pops.iter().enumerate() {
            let expected =
                binomial(5, k as u64) * eta.powi(k as i32) * (1.0 - eta).powi(5 - k as i32);
            assert!((p - expected).abs() < 1e-14, "k={k}");
        }
        for r in 0..6 {
            for c in 0..6 {
                if r != c {
                    assert_eq!(out.get(r, c).norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn vacuum_is_loss_invariant() {
        let vac = FockVector::basis(0, 4).unwrap().to_density();
        let out = apply_channel(&vac, &loss_channel(0.37, 4).unwrap()).unwrap();
        assert!(out.max_abs_diff(&vac).unwrap().0 < 1e-15);
    }

    #[test]
    fn half_loss_on_single_photon() {
        let rho = FockVector::basis(1, 2).unwrap().to_density();
        let out = apply_channel(&rho, &loss_channel(0.5, 2).unwrap()).unwrap();
        assert!((out.get(0, 0).re - 0.5).abs() < 1e-15);
        assert!((out.get(1, 1).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn identity_channel_leaves_state_alone() {
        let psi = FockVector::normalized(vec![
            Complex64::new(1.0, 0.5),
            Complex64::new(0.0, -0.3),
            Complex64::new(0.2, 0.0),
        ])
        .unwrap();
        let rho = psi.to_density();
        let out = apply_channel(&rho, &KrausChannel::identity(3)).unwrap();
        assert!(out.max_abs_diff(&rho).unwrap().0 < 1e-15);
    }

    #[test]
    fn invalid_eta_rejected() {
        for eta in [0.0, -0.1, 1.5, f64::NAN] {
            assert!(loss_channel(eta, 3).is_err(), "eta={eta}");
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let rho = FockVector::basis(0, 3).unwrap().to_density();
        assert!(matches!(
            apply_channel(&rho, &loss_channel(0.5, 4).unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn incomplete_kraus_set_rejected() {
        let half = CMatrix::identity(2, 2) * Complex64::new(0.5, 0.0);
        assert!(matches!(
            KrausChannel::new(vec![half]),
            Err(Error::NotTracePreserving { .. })
        ));
    }

    #[test]
    fn completeness_holds_for_large_truncation() {
        for eta in [0.3, 0.5, 0.9, 1.0] {
            let ch = loss_channel(eta, 120).unwrap();
            assert!(
                ch.completeness_deviation() < COMPLETENESS_TOLERANCE,
                "eta={eta}"
            );
        }
    }
}
