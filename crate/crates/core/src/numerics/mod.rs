//! Dense complex linear algebra for quantum objects.
//!
//! Every tensor product in this crate is left-major: in `a ⊗ b` the index of
//! `a` varies slowest, and for a bipartite space `H_B ⊗ H_C` the composite
//! index is `b * dim_c + c`.

mod random;
mod state;

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) use random::random_unit_vector;
pub use random::{
    complex_gaussian_matrix, derive_seed, random_density, random_isometry, random_pure,
    random_unitary, rng_from_seed, DEFAULT_SEED,
};
pub use state::{DensityMatrix, PureState};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

pub const DEFAULT_MAX_DIM: usize = 4096;

/// Numerical tolerances shared by validation and rank decisions.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    pub herm: f64,
    pub trace: f64,
    pub norm: f64,
    /// Eigenvalues in `(-psd, 0)` are treated as zero.
    pub psd: f64,
    /// Relative eigenvalue cutoff for rank decisions.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-9,
            trace: 1e-9,
            norm: 1e-9,
            psd: 1e-10,
            rank: 1e-9,
        }
    }
}

/// Upper bound on the total dimension of any tensor product, read once from
/// `CHANCOMP_MAX_DIM` and falling back to [`DEFAULT_MAX_DIM`].
pub fn max_dim() -> usize {
    static MAX_DIM: OnceLock<usize> = OnceLock::new();
    *MAX_DIM.get_or_init(|| {
        std::env::var("CHANCOMP_MAX_DIM")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&v: &usize| v > 0)
            .unwrap_or(DEFAULT_MAX_DIM)
    })
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    let max_dim = max_dim();
    if dim > max_dim {
        return Err(Error::DimensionLimit { dim, max_dim });
    }
    Ok(())
}

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Kronecker product, left factor major.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.nrows().checked_mul(b.nrows());
    let cols = a.ncols().checked_mul(b.ncols());
    match (rows, cols) {
        (Some(r), Some(c)) => {
            check_dim(r)?;
            check_dim(c)?;
        }
        _ => {
            return Err(Error::DimensionLimit {
                dim: usize::MAX,
                max_dim: max_dim(),
            })
        }
    }
    Ok(a.kronecker(b))
}

/// Which factor of `H_B ⊗ H_C` survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Subsystem {
    B,
    C,
}

pub fn partial_trace(
    m: &ComplexMatrix,
    dim_b: usize,
    dim_c: usize,
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    let n = dim_b * dim_c;
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::Shape(format!(
            "partial trace expects {n}x{n} for {dim_b}x{dim_c} factors, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(match keep {
        Subsystem::B => ComplexMatrix::from_fn(dim_b, dim_b, |b, bp| {
            (0..dim_c).map(|c| m[(b * dim_c + c, bp * dim_c + c)]).sum()
        }),
        Subsystem::C => ComplexMatrix::from_fn(dim_c, dim_c, |c, cp| {
            (0..dim_b).map(|b| m[(b * dim_c + c, b * dim_c + cp)]).sum()
        }),
    })
}

/// Largest absolute entry of `h - h*`.
pub fn hermiticity_residual(h: &ComplexMatrix) -> f64 {
    if !h.is_square() {
        return f64::INFINITY;
    }
    let n = h.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn ensure_hermitian(h: &ComplexMatrix, tol: f64) -> Result<()> {
    if !h.is_square() {
        return Err(Error::Shape(format!(
            "expected a square matrix, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    let res = hermiticity_residual(h);
    if res > tol {
        return Err(Error::Validation(format!(
            "matrix is not Hermitian (residual {res:e} > {tol:e})"
        )));
    }
    Ok(())
}

/// Eigen-decomposition of the Hermitian part of `h`, eigenvalues descending
/// and eigenvectors as matching columns.
pub fn hermitian_eigen(h: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

/// Eigenvalues of the Hermitian part of `h`, descending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Vec<f64> {
    let sym = (h + h.adjoint()).scale(0.5);
    let mut values: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Eigenvalues with `|λ| > tol`, sorted descending.
pub fn nonzero_spectrum(h: &ComplexMatrix, tol: f64) -> Result<Vec<f64>> {
    ensure_hermitian(h, Tolerances::default().herm.max(tol))?;
    Ok(hermitian_eigenvalues(h)
        .into_iter()
        .filter(|l| l.abs() > tol)
        .collect())
}

/// Elementwise comparison of two descending spectra, the shorter one padded
/// with zeros. Returns the largest deviation.
pub fn spectrum_distance(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

/// `-Σ λ ln λ` over a spectrum, skipping non-positive entries.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum()
}

pub fn von_neumann_entropy(sigma: &DensityMatrix) -> f64 {
    let values: Vec<f64> = sigma
        .clamped_spectrum()
        .iter()
        .map(|l| l.min(1.0))
        .collect();
    entropy_of_spectrum(&values)
}

/// `Tr σ^p` for finite `p ≥ 1`.
pub fn trace_power(sigma: &DensityMatrix, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::Domain(format!(
            "trace power needs finite p >= 1, got {p}"
        )));
    }
    Ok(sigma.clamped_spectrum().iter().map(|l| l.powf(p)).sum())
}

/// Largest entry modulus.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    hermitian_eigenvalues(&gram)
        .first()
        .copied()
        .unwrap_or(0.0)
        .max(0.0)
        .sqrt()
}

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

/// Canonical basis vector `e_k` of `C^d`.
pub fn basis_vector(d: usize, k: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(d);
    v[k] = real(1.0);
    v
}

/// `|i⟩⟨j|` in `M_d`.
pub fn matrix_unit(d: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    m[(i, j)] = real(1.0);
    m
}

pub fn outer(u: &ComplexVector, v: &ComplexVector) -> ComplexMatrix {
    u * v.adjoint()
}

/// Factorizes a PSD matrix as `c = L L*` by Cholesky with diagonal pivoting,
/// returning `L` with one column per retained pivot. Pivots at or below
/// `rel_tol · max diag` terminate the factorization. A pivot that is
/// significantly negative, or a remainder that is not PSD, is reported as a
/// domain error.
pub fn pivoted_cholesky(c: &ComplexMatrix, rel_tol: f64) -> Result<ComplexMatrix> {
    ensure_hermitian(c, 1e-9 * max_abs(c).max(1.0))?;
    let n = c.nrows();
    let scale = (0..n).map(|i| c[(i, i)].re.abs()).fold(0.0, f64::max);
    if n == 0 || scale == 0.0 {
        return Err(Error::Domain(
            "cannot factor a zero correlation matrix".into(),
        ));
    }
    let cutoff = rel_tol * scale;
    let mut residual = c.clone();
    let mut columns: Vec<ComplexVector> = Vec::new();
    let mut used = vec![false; n];
    loop {
        let pivot = (0..n)
            .filter(|&i| !used[i])
            .max_by(|&i, &j| residual[(i, i)].re.total_cmp(&residual[(j, j)].re));
        let Some(k) = pivot else { break };
        let d = residual[(k, k)].re;
        if d <= cutoff {
            break;
        }
        used[k] = true;
        let root = d.sqrt();
        let col = ComplexVector::from_fn(n, |i, _| residual[(i, k)] / root);
        residual -= &col * col.adjoint();
        columns.push(col);
    }
    // Whatever is left must be negligible; a large remainder (or a negative
    // diagonal) means the input was not PSD.
    let leftover = (0..n)
        .map(|i| residual[(i, i)].re)
        .fold(0.0f64, |a, x| a.max(x.abs()));
    let off = max_abs(&residual);
    if leftover > 1e3 * cutoff.max(1e-12) || off > 1e3 * cutoff.max(1e-12) {
        return Err(Error::Domain(format!(
            "matrix is not positive semidefinite (Cholesky remainder {:e})",
            leftover.max(off)
        )));
    }
    if columns.is_empty() {
        return Err(Error::Domain("correlation matrix has rank zero".into()));
    }
    Ok(ComplexMatrix::from_columns(&columns))
}
