use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

/// Numerical tolerances shared by the spectral routines.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Singular values at or below `rank_tol * sigma_1` count as zero.
    pub rank_tol: f64,
    pub orthonormality: f64,
    pub reconstruction: f64,
    pub projector: f64,
    /// Maximum asymmetry accepted when loading a matrix from text.
    pub load_symmetry: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank_tol: 1e-10,
            orthonormality: 1e-9,
            reconstruction: 1e-7,
            projector: 1e-8,
            load_symmetry: 1e-12,
        }
    }
}

/// Dense real symmetric matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    inner: DMatrix<f64>,
}

impl SymMatrix {
    /// Wraps an exactly symmetric, finite, non-empty square matrix.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        check_square_finite(&m)?;
        let n = m.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                if m[(i, j)] != m[(j, i)] {
                    return input(format!("matrix not symmetric at ({i},{j})"));
                }
            }
        }
        Ok(SymMatrix { inner: m })
    }

    /// Accepts asymmetry up to `tol` (absolute) and averages the two triangles.
    pub fn symmetrized(m: DMatrix<f64>, tol: f64) -> Result<Self> {
        check_square_finite(&m)?;
        let n = m.nrows();
        let mut out = m;
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (out[(i, j)], out[(j, i)]);
                if (a - b).abs() > tol {
                    return input(format!(
                        "matrix not symmetric at ({i},{j}): {a} vs {b}"
                    ));
                }
                let avg = 0.5 * (a + b);
                out[(i, j)] = avg;
                out[(j, i)] = avg;
            }
        }
        Ok(SymMatrix { inner: out })
    }

    /// Averages the triangles of a matrix produced by symmetric arithmetic.
    pub(crate) fn from_computed(m: DMatrix<f64>) -> Self {
        let n = m.nrows();
        let mut out = m;
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (out[(i, j)] + out[(j, i)]);
                out[(i, j)] = avg;
                out[(j, i)] = avg;
            }
        }
        SymMatrix { inner: out }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return input("rows must all have length n");
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix { inner: DMatrix::identity(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.inner
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix> {
        if self.dim() != other.dim() {
            return input("dimension mismatch");
        }
        Ok(SymMatrix { inner: &self.inner + &other.inner })
    }

    pub fn sub(&self, other: &SymMatrix) -> Result<SymMatrix> {
        if self.dim() != other.dim() {
            return input("dimension mismatch");
        }
        Ok(SymMatrix { inner: &self.inner - &other.inner })
    }

    pub fn scale(&self, c: f64) -> SymMatrix {
        SymMatrix { inner: &self.inner * c }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.norm()
    }

    /// Largest absolute eigenvalue.
    pub fn spectral_norm(&self) -> f64 {
        spectral_norm_sym(&self.inner)
    }
}

fn check_square_finite(m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() == 0 || m.nrows() != m.ncols() {
        return input(format!("expected non-empty square matrix, got {}x{}", m.nrows(), m.ncols()));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return input("matrix has non-finite entries");
    }
    Ok(())
}

pub(crate) fn spectral_norm_sym(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    let eig = m.clone().symmetric_eigen();
    eig.eigenvalues.iter().fold(0.0_f64, |a, &x| a.max(x.abs()))
}

/// Largest singular value of an arbitrary matrix.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let gram = if m.nrows() <= m.ncols() { m * m.transpose() } else { m.transpose() * m };
    spectral_norm_sym(&gram).max(0.0).sqrt()
}

/// Rank-r orthogonal projector, stored via an orthonormal n x r basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Projector {
    basis: DMatrix<f64>,
}

impl Projector {
    /// Wraps a basis that must already be orthonormal to `tol`.
    pub fn from_basis(basis: DMatrix<f64>, tol: f64) -> Result<Self> {
        let r = basis.ncols();
        let gram = basis.transpose() * &basis;
        let err = (gram - DMatrix::<f64>::identity(r, r)).abs().max();
        if r > 0 && err > tol {
            return input(format!("basis not orthonormal (error {err:.3e})"));
        }
        Ok(Projector { basis })
    }

    pub(crate) fn from_basis_unchecked(basis: DMatrix<f64>) -> Self {
        Projector { basis }
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        &self.basis * self.basis.transpose()
    }

    /// Diagonal of the projector; its maximum equals the max-entry norm.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.basis.row(i).norm_squared()).collect()
    }

    pub fn max_diagonal(&self) -> f64 {
        self.diagonal().into_iter().fold(0.0, f64::max)
    }
}
