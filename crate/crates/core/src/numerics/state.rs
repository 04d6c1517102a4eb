use crate::error::{Error, Result};

use super::{
    ensure_hermitian, hermitian_eigenvalues, outer, ComplexMatrix, ComplexVector, Tolerances,
};

/// Hermitian positive semidefinite matrix. `normalized` records whether the
/// unit-trace contract was checked; outputs of non-trace-preserving CP maps
/// are carried with `normalized == false`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    normalized: bool,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerances(matrix, &Tolerances::default())
    }

    pub fn with_tolerances(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let state = Self::unnormalized_with(matrix, tol)?;
        let tr = state.trace();
        if (tr - 1.0).abs() > tol.trace {
            return Err(Error::Validation(format!(
                "density matrix has trace {tr}, expected 1"
            )));
        }
        Ok(Self {
            normalized: true,
            ..state
        })
    }

    /// Hermitian PSD matrix of arbitrary trace.
    pub fn unnormalized(matrix: ComplexMatrix) -> Result<Self> {
        Self::unnormalized_with(matrix, &Tolerances::default())
    }

    fn unnormalized_with(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if matrix.nrows() == 0 {
            return Err(Error::Shape("empty density matrix".into()));
        }
        ensure_hermitian(&matrix, tol.herm)?;
        let scale = super::max_abs(&matrix).max(1.0);
        let min = hermitian_eigenvalues(&matrix)
            .last()
            .copied()
            .unwrap_or(0.0);
        if min < -tol.psd * scale {
            return Err(Error::Validation(format!(
                "matrix is not positive semidefinite (eigenvalue {min:e})"
            )));
        }
        Ok(Self {
            matrix,
            normalized: false,
        })
    }

    pub(crate) fn from_trusted(matrix: ComplexMatrix, normalized: bool) -> Self {
        Self { matrix, normalized }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim, dim).unscale(dim as f64),
            normalized: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Spectrum (descending) with small negative drift set to zero.
    pub fn clamped_spectrum(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
            .into_iter()
            .map(|l| l.max(0.0))
            .collect()
    }
}

/// Unit vector in `C^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: ComplexVector,
}

impl PureState {
    pub fn new(amplitudes: ComplexVector) -> Result<Self> {
        let n = amplitudes.norm();
        if amplitudes.is_empty() || (n - 1.0).abs() > Tolerances::default().norm {
            return Err(Error::Validation(format!(
                "state vector has norm {n}, expected 1"
            )));
        }
        Ok(Self { amplitudes })
    }

    pub fn from_unnormalized(amplitudes: ComplexVector) -> Result<Self> {
        let n = amplitudes.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Validation("cannot normalize a zero vector".into()));
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(n),
        })
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        Self {
            amplitudes: super::basis_vector(dim, k),
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn projector(&self) -> ComplexMatrix {
        outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_trusted(self.projector(), true)
    }
}
