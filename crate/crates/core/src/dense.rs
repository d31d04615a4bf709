//! Dense complex operators on (bipartite) spin Hilbert spaces.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::Real;

/// A square complex matrix, optionally tagged with the factor dimensions
/// `(n1, n2)` of a bipartite space `C^n1 ⊗ C^n2`.
///
/// Product-basis index of `(a, b)` is `a * n2 + b`, where `a` and `b` count
/// magnetic numbers downward from `+j`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator<T: Real> {
    matrix: DMatrix<Complex<T>>,
    factors: Option<(usize, usize)>,
}

/// Spectrum of a Hermitian operator; eigenvalues ascend and `vectors`
/// holds the matching eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct HermitianSpectrum<T: Real> {
    pub values: Vec<T>,
    pub vectors: DMatrix<Complex<T>>,
}

impl<T: Real> DenseOperator<T> {
    pub fn new(matrix: DMatrix<Complex<T>>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::Dimension(format!(
                "expected a non-empty square matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self {
            matrix,
            factors: None,
        })
    }

    pub fn bipartite(matrix: DMatrix<Complex<T>>, n1: usize, n2: usize) -> Result<Self> {
        Self::new(matrix)?.with_factors(n1, n2)
    }

    pub fn from_real(matrix: DMatrix<T>) -> Result<Self> {
        Self::new(matrix.map(|x| Complex::new(x, T::zero())))
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
            factors: None,
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: DMatrix::zeros(dim, dim),
            factors: None,
        }
    }

    /// Tags the operator with factor dimensions; `n1 * n2` must equal `dim`.
    pub fn with_factors(mut self, n1: usize, n2: usize) -> Result<Self> {
        if n1 * n2 != self.dim() {
            return Err(Error::Dimension(format!(
                "factor dims {n1}x{n2} do not multiply to {}",
                self.dim()
            )));
        }
        self.factors = Some((n1, n2));
        Ok(self)
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &DVector<Complex<T>>) -> Self {
        Self {
            matrix: v * v.adjoint(),
            factors: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn factors(&self) -> Option<(usize, usize)> {
        self.factors
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex<T>> {
        self.matrix
    }

    pub fn trace(&self) -> Complex<T> {
        self.matrix.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            factors: self.factors,
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            matrix: self.matrix.transpose(),
            factors: self.factors,
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            matrix: self.matrix.map(|z| z * s),
            factors: self.factors,
        }
    }

    /// Matrix product; factor dims survive when both sides agree.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        Ok(Self {
            matrix: &self.matrix * &rhs.matrix,
            factors: merge_factors(self.factors, rhs.factors),
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        Ok(Self {
            matrix: &self.matrix + &rhs.matrix,
            factors: merge_factors(self.factors, rhs.factors),
        })
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> T {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        self.matrix
            .iter()
            .zip(rhs.matrix.iter())
            .map(|(a, b)| (*a - *b).modulus())
            .fold(T::zero(), |m, x| if x > m { x } else { m })
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Eigen-decomposition of the Hermitian part `(A + A†)/2`.
    pub fn hermitian_spectrum(&self) -> HermitianSpectrum<T> {
        let half = T::lit(0.5);
        let sym = (&self.matrix + self.matrix.adjoint()).map(|z| z * half);
        let eig = sym.symmetric_eigen();
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| {
            eig.eigenvalues[i]
                .partial_cmp(&eig.eigenvalues[j])
                .expect("finite eigenvalues")
        });
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            eig.eigenvectors[(r, order[c])]
        });
        HermitianSpectrum { values, vectors }
    }

    pub fn eigenvalues_hermitian(&self) -> Vec<T> {
        self.hermitian_spectrum().values
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues_hermitian()[0]
    }

    /// Checks Hermiticity, unit trace and positivity within `tol`.
    pub fn check_density(&self, tol: T) -> Result<()> {
        if !self.is_hermitian(tol) {
            return Err(Error::NotDensity("not Hermitian".into()));
        }
        let tr = self.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::NotDensity(format!("trace {} != 1", tr.re)));
        }
        let min = self.min_eigenvalue();
        if min < -tol {
            return Err(Error::NotDensity(format!("negative eigenvalue {min}")));
        }
        Ok(())
    }

    fn check_dim(&self, rhs: &Self) -> Result<()> {
        if self.dim() != rhs.dim() {
            return Err(Error::Dimension(format!("{} vs {}", self.dim(), rhs.dim())));
        }
        Ok(())
    }
}

fn merge_factors(a: Option<(usize, usize)>, b: Option<(usize, usize)>) -> Option<(usize, usize)> {
    match (a, b) {
        (Some(x), Some(y)) if x == y => Some(x),
        (Some(x), None) | (None, Some(x)) => Some(x),
        _ => None,
    }
}
