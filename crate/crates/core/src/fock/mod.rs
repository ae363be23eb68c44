//! Truncated single-mode Fock-space linear algebra.
//!
//! A mode truncated at dimension `D` is spanned by the number states
//! `|0⟩..|D−1⟩`. States are dense complex vectors, mixed states dense
//! `D × D` matrices. Everything here is immutable after construction.

mod binomial;
mod channel;
mod permutation;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{check_finite, invalid, Error, Result};

pub use binomial::{binomial, ln_binomial};
pub use channel::{apply_channel, loss_channel, KrausChannel};
pub use permutation::PermutationUnitary;

pub(crate) type CMatrix = DMatrix<Complex64>;

/// Normalization tolerance on `Σ|amp|²`.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Elementwise tolerance for Hermiticity of density matrices.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Tolerance on `|tr ρ − 1|`.
pub const TRACE_TOLERANCE: f64 = 1e-10;
/// Smallest eigenvalue accepted as numerically positive.
pub const POSITIVITY_TOLERANCE: f64 = 1e-9;
/// Elementwise tolerance for Hermiticity of observables.
pub const OBSERVABLE_TOLERANCE: f64 = 1e-10;

/// A normalized pure state of one truncated mode.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: DVector<Complex64>,
}

impl FockVector {
    /// Builds a state from amplitudes that must already be normalized.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(invalid("dim", "a Fock vector needs at least one level"));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(invalid("amps", "amplitudes must be finite"));
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self {
            amps: DVector::from_vec(amps),
        })
    }

    /// Builds a state by rescaling arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !(norm_sqr.is_finite() && norm_sqr > 0.0) {
            return Err(Error::NotNormalized { norm_sqr });
        }
        let scale = norm_sqr.sqrt().recip();
        Self::new(amps.into_iter().map(|a| a * scale).collect())
    }

    /// The number state `|n⟩` in dimension `dim`.
    pub fn basis(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(invalid(
                "n",
                format!("|{n}⟩ does not fit in dimension {dim}"),
            ));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[n] = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        self.amps.as_slice()
    }

    pub fn amp(&self, n: usize) -> Complex64 {
        self.amps[n]
    }

    /// Mean photon number `Σ n |amp_n|²`.
    pub fn mean_photon_number(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(n, a)| n as f64 * a.norm_sqr())
            .sum()
    }

    /// Largest index carrying a nonzero amplitude.
    pub fn max_occupied(&self) -> usize {
        self.amps
            .iter()
            .rposition(|a| a.norm_sqr() > 0.0)
            .unwrap_or(0)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockVector) -> Result<Complex64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self.amps.dotc(&other.amps))
    }

    /// Copy of this state embedded in (or truncated to) dimension `dim`.
    /// Truncation only succeeds when the dropped amplitudes are zero.
    pub fn with_dim(&self, dim: usize) -> Result<Self> {
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        for (n, a) in self.amps.iter().enumerate() {
            if n < dim {
                amps[n] = *a;
            } else if a.norm_sqr() > 0.0 {
                return Err(invalid(
                    "dim",
                    format!("|{n}⟩ is occupied, cannot truncate to {dim}"),
                ));
            }
        }
        Self::new(amps)
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            elems: &self.amps * self.amps.adjoint(),
        }
    }

    pub(crate) fn from_vector_unchecked(amps: DVector<Complex64>) -> Self {
        Self { amps }
    }
}

/// A mixed state of one truncated mode.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    elems: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity and unit trace. Positivity is checked separately
    /// by [`DensityMatrix::check_positive`] since it needs an eigensolve.
    pub fn new(elems: DMatrix<Complex64>) -> Result<Self> {
        if elems.nrows() == 0 {
            return Err(invalid("dim", "a density matrix needs at least one level"));
        }
        check_dims(elems.nrows(), elems.ncols())?;
        if elems.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numerical(
                "density matrix has non-finite entries".into(),
            ));
        }
        let deviation = hermitian_deviation(&elems);
        if deviation > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = elems.trace().re;
        if (trace - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::BadTrace { trace });
        }
        Ok(Self { elems })
    }

    /// The maximally mixed state `I/D`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dim", "must be positive"));
        }
        Self::new(CMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.elems.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.elems[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.elems
    }

    pub fn trace(&self) -> f64 {
        self.elems.trace().re
    }

    /// Real diagonal (photon-number populations).
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|n| self.elems[(n, n)].re).collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.elems
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Fails when the smallest eigenvalue is below `−1e−9`.
    pub fn check_positive(&self) -> Result<()> {
        let min_eigenvalue = self.min_eigenvalue();
        if min_eigenvalue < -POSITIVITY_TOLERANCE {
            Err(Error::NotPositive { min_eigenvalue })
        } else {
            Ok(())
        }
    }

    /// Positivity check that only runs in debug builds.
    pub(crate) fn debug_check_positive(self) -> Result<Self> {
        if cfg!(debug_assertions) {
            self.check_positive()?;
        }
        Ok(self)
    }

    /// Largest elementwise modulus of `self − other` and where it occurs.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<(f64, (usize, usize))> {
        check_dims(self.dim(), other.dim())?;
        let mut worst = (0.0, (0, 0));
        for col in 0..self.dim() {
            for row in 0..self.dim() {
                let d = (self.elems[(row, col)] - other.elems[(row, col)]).norm();
                if d > worst.0 {
                    worst = (d, (row, col));
                }
            }
        }
        Ok(worst)
    }

    /// Hermitian part of `elems`, for results of arithmetic that should be
    /// Hermitian up to rounding.
    pub(crate) fn from_hermitian_part(elems: CMatrix) -> Result<Self> {
        let sym = (&elems + elems.adjoint()) * Complex64::new(0.5, 0.0);
        Self::new(sym)
    }

    pub(crate) fn from_matrix_unchecked(elems: CMatrix) -> Self {
        Self { elems }
    }
}

/// A phase shift `e^{iφ n̂}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShift {
    phi: f64,
}

impl PhaseShift {
    pub fn new(phi: f64) -> Result<Self> {
        Ok(Self {
            phi: check_finite("phi", phi)?,
        })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    fn factor(&self, n: i64) -> Complex64 {
        Complex64::from_polar(1.0, n as f64 * self.phi)
    }
}

/// Types that a [`PhaseShift`] acts on.
pub trait PhaseShiftable: Sized {
    fn phase_shifted(&self, shift: PhaseShift) -> Self;
}

impl PhaseShiftable for FockVector {
    fn phase_shifted(&self, shift: PhaseShift) -> Self {
        let amps = DVector::from_iterator(
            self.dim(),
            self.amps
                .iter()
                .enumerate()
                .map(|(n, a)| a * shift.factor(n as i64)),
        );
        Self::from_vector_unchecked(amps)
    }
}

impl PhaseShiftable for DensityMatrix {
    fn phase_shifted(&self, shift: PhaseShift) -> Self {
        let elems = CMatrix::from_fn(self.dim(), self.dim(), |n, m| {
            self.elems[(n, m)] * shift.factor(n as i64 - m as i64)
        });
        Self::from_matrix_unchecked(elems)
    }
}

/// Multiplies the amplitude of `|n⟩` by `e^{inφ}` (element `(n, m)` of a
/// density matrix by `e^{i(n−m)φ}`).
pub fn apply_phase<T: PhaseShiftable>(state: &T, phi: f64) -> Result<T> {
    Ok(state.phase_shifted(PhaseShift::new(phi)?))
}

/// A Hermitian operator on the truncated mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: CMatrix,
}

impl Observable {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        check_dims(matrix.nrows(), matrix.ncols())?;
        let deviation = hermitian_deviation(&matrix);
        if deviation > OBSERVABLE_TOLERANCE {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim),
        }
    }

    /// `a†a`.
    pub fn number(dim: usize) -> Self {
        Self {
            matrix: CMatrix::from_fn(dim, dim, |r, c| {
                if r == c {
                    Complex64::new(r as f64, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn squared(&self) -> Self {
        Self {
            matrix: &self.matrix * &self.matrix,
        }
    }
}

/// `tr(ρ·obs)`.
pub fn expectation(rho: &DensityMatrix, obs: &Observable) -> Result<f64> {
    check_dims(rho.dim(), obs.dim())?;
    let value = trace_of_product(rho.matrix(), obs.matrix());
    if value.im.abs() > OBSERVABLE_TOLERANCE {
        return Err(Error::Numerical(format!(
            "expectation value has imaginary part {:.3e}",
            value.im
        )));
    }
    Ok(value.re)
}

/// `tr(a·b)` without forming the product.
pub(crate) fn trace_of_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let dim = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..dim {
        for m in 0..dim {
            acc += a[(n, m)] * b[(m, n)];
        }
    }
    acc
}

pub(crate) fn hermitian_deviation(m: &CMatrix) -> f64 {
    let dim = m.nrows();
    let mut worst: f64 = 0.0;
    for r in 0..dim {
        for c in r..dim {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn check_dims(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}
