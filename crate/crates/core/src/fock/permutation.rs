use num_complex::Complex64;

use super::{check_dims, CMatrix, DensityMatrix, FockVector};
use crate::error::{invalid, Result};

/// Reverses the number states `|0⟩..|M⟩` (`|n⟩ ↦ |M−n⟩`) and fixes every
/// `|n⟩` with `n > M`. Its own inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PermutationUnitary {
    m: usize,
    dim: usize,
}

impl PermutationUnitary {
    pub fn new(m: usize, dim: usize) -> Result<Self> {
        if dim < m + 1 {
            return Err(invalid(
                "dim",
                format!(
                    "permuting |0⟩..|{m}⟩ needs dimension ≥ {}, got {dim}",
                    m + 1
                ),
            ));
        }
        Ok(Self { m, dim })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Image of the basis index `n`.
    pub fn map_index(&self, n: usize) -> usize {
        if n <= self.m {
            self.m - n
        } else {
            n
        }
    }

    pub fn apply_vector(&self, psi: &FockVector) -> Result<FockVector> {
        check_dims(self.dim, psi.dim())?;
        let mut amps = vec![Complex64::new(0.0, 0.0); self.dim];
        for (n, a) in psi.amps().iter().enumerate() {
            amps[self.map_index(n)] = *a;
        }
        FockVector::new(amps)
    }

    /// `U ρ U†`, computed as an exact index relabeling.
    pub fn apply_density(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        check_dims(self.dim, rho.dim())?;
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for col in 0..self.dim {
            for row in 0..self.dim {
                out[(self.map_index(row), self.map_index(col))] = rho.get(row, col);
            }
        }
        Ok(DensityMatrix::from_matrix_unchecked(out))
    }

    /// Dense 0/1 matrix with `U[map(n), n] = 1`.
    pub fn to_matrix(&self) -> CMatrix {
        let mut u = CMatrix::zeros(self.dim, self.dim);
        for n in 0..self.dim {
            u[(self.map_index(n), n)] = Complex64::new(1.0, 0.0);
        }
        u
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_two_reverses_first_three_levels() {
        let u = PermutationUnitary::new(2, 4).unwrap();
        let images: Vec<usize> = (0..4).map(|n| u.map_index(n)).collect();
        assert_eq!(images, vec![2, 1, 0, 3]);
        for (n, image) in images.into_iter().enumerate() {
            let out = u.apply_vector(&FockVector::basis(n, 4).unwrap()).unwrap();
            assert_eq!(out, FockVector::basis(image, 4).unwrap());
        }
    }

    #[test]
    fn m_zero_is_identity() {
        let u = PermutationUnitary::new(0, 5).unwrap();
        assert_eq!(u.to_matrix(), CMatrix::identity(5, 5));
    }

    #[test]
    fn matrix_is_unitary_permutation() {
        let u = PermutationUnitary::new(6, 9).unwrap().to_matrix();
        assert_eq!(u.adjoint() * &u, CMatrix::identity(9, 9));
        assert!(u
            .iter()
            .all(|z| z.im == 0.0 && (z.re == 0.0 || z.re == 1.0)));
    }

    #[test]
    fn density_relabeling_matches_conjugation() {
        let psi = FockVector::normalized(vec![
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.2, 0.7),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.4),
        ])
        .unwrap();
        let rho = psi.to_density();
        let u = PermutationUnitary::new(2, 4).unwrap();
        let by_relabel = u.apply_density(&rho).unwrap();
        let m = u.to_matrix();
        let by_product = &m * rho.matrix() * m.adjoint();
        assert_eq!(by_relabel.matrix(), &by_product);
    }

    #[test]
    fn too_small_dimension_rejected() {
        assert!(PermutationUnitary::new(3, 3).is_err());
    }
}
