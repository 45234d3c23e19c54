use nalgebra::DMatrix;

use super::matrix::{spectral_norm, Projector, SymMatrix, Tolerances};
use crate::error::{input, Error, Result};

/// SVD of a symmetric matrix, M = U diag(sigma) diag(signs) U^T.
///
/// Singular values are sorted descending. Each column of `u` has its first
/// nonzero coordinate positive.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub sigma: Vec<f64>,
    /// Sign of the eigenvalue behind each singular value (+1 for zero).
    pub signs: Vec<f64>,
    pub u: DMatrix<f64>,
    pub rank_tol: f64,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.sigma.len()
    }

    /// Number of singular values above `rank_tol * sigma_1`.
    pub fn numerical_rank(&self) -> usize {
        let cut = self.rank_tol * self.sigma.first().copied().unwrap_or(0.0);
        self.sigma.iter().filter(|&&s| s > cut).count()
    }

    /// sigma_k with 1-based k; zero past the dimension.
    pub fn sigma_at(&self, k: usize) -> f64 {
        if k == 0 {
            return f64::INFINITY;
        }
        self.sigma.get(k - 1).copied().unwrap_or(0.0)
    }

    pub fn top_basis(&self, r: usize) -> DMatrix<f64> {
        self.u.columns(0, r).into_owned()
    }

    /// Right singular vectors (V = U diag(signs)).
    pub fn v(&self) -> DMatrix<f64> {
        let mut v = self.u.clone();
        for (k, s) in self.signs.iter().enumerate() {
            if *s < 0.0 {
                v.column_mut(k).neg_mut();
            }
        }
        v
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut scaled = self.u.clone();
        for k in 0..n {
            let f = self.sigma[k] * self.signs[k];
            scaled.column_mut(k).scale_mut(f);
        }
        scaled * self.u.transpose()
    }
}

/// Flips `col` so that its first coordinate above `1e-12` in magnitude is positive.
pub(crate) fn canonical_sign(col: &mut nalgebra::DVectorViewMut<'_, f64>) {
    if let Some(x) = col.iter().find(|x| x.abs() > 1e-12) {
        if *x < 0.0 {
            col.neg_mut();
        }
    }
}

pub fn svd_full(m: &SymMatrix) -> SpectralDecomposition {
    svd_full_with(m, &Tolerances::default())
}

pub fn svd_full_with(m: &SymMatrix, tol: &Tolerances) -> SpectralDecomposition {
    let n = m.dim();
    let eig = m.as_matrix().clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let (la, lb) = (eig.eigenvalues[a], eig.eigenvalues[b]);
        lb.abs()
            .total_cmp(&la.abs())
            .then(lb.total_cmp(&la))
            .then(a.cmp(&b))
    });
    let mut u = DMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    let mut signs = Vec::with_capacity(n);
    for (k, &idx) in order.iter().enumerate() {
        let lambda = eig.eigenvalues[idx];
        sigma.push(lambda.abs());
        signs.push(if lambda < 0.0 { -1.0 } else { 1.0 });
        u.set_column(k, &eig.eigenvectors.column(idx));
        canonical_sign(&mut u.column_mut(k));
    }
    SpectralDecomposition { sigma, signs, u, rank_tol: tol.rank_tol }
}

/// Thin SVD of a rectangular matrix, B = U diag(sigma) V^T.
#[derive(Clone, Debug)]
pub struct RectSvd {
    pub sigma: Vec<f64>,
    pub u: DMatrix<f64>,
    pub v: DMatrix<f64>,
}

impl RectSvd {
    pub fn sigma_at(&self, k: usize) -> f64 {
        self.sigma.get(k.wrapping_sub(1)).copied().unwrap_or(0.0)
    }
}

/// Thin SVD through the smaller Gram matrix; returns min(n, m) triplets.
pub fn rect_svd(b: &DMatrix<f64>) -> Result<RectSvd> {
    let (n, m) = b.shape();
    if n == 0 || m == 0 {
        return input("empty matrix");
    }
    if b.iter().any(|x| !x.is_finite()) {
        return input("matrix has non-finite entries");
    }
    let transpose = n > m;
    let small = if transpose { b.transpose() * b } else { b * b.transpose() };
    let k = n.min(m);
    let eig = SymMatrix::from_computed(small).into_matrix().symmetric_eigen();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &c| eig.eigenvalues[c].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&c)));
    let mut sigma = Vec::with_capacity(k);
    let mut left = DMatrix::zeros(k, k);
    for (col, &idx) in order.iter().enumerate() {
        sigma.push(eig.eigenvalues[idx].max(0.0).sqrt());
        left.set_column(col, &eig.eigenvectors.column(idx));
        canonical_sign(&mut left.column_mut(col));
    }
    // left holds singular vectors of the smaller side; recover the other side.
    let other = if transpose { b * &left } else { b.transpose() * &left };
    let mut other = other;
    let cut = 1e-12 * sigma.first().copied().unwrap_or(0.0);
    for (col, s) in sigma.iter().enumerate() {
        if *s > cut {
            other.column_mut(col).scale_mut(1.0 / s);
        } else {
            other.column_mut(col).fill(0.0);
        }
    }
    let (u, v) = if transpose { (other, left) } else { (left, other) };
    Ok(RectSvd { sigma, u, v })
}

fn check_rank(dec: &SpectralDecomposition, r: usize) -> Result<()> {
    let available = dec.numerical_rank();
    if r == 0 || r > available {
        return Err(Error::Rank { requested: r, available });
    }
    Ok(())
}

/// Projector onto the top-r singular subspace.
pub fn top_r_projector(dec: &SpectralDecomposition, r: usize) -> Result<Projector> {
    if r == 0 || r > dec.dim() {
        return Err(Error::Rank { requested: r, available: dec.dim() });
    }
    Ok(Projector::from_basis_unchecked(dec.top_basis(r)))
}

/// mu_r(M) = (n/r) * max_i (P_r)_ii.
pub fn coherence_r(m: &SymMatrix, r: usize) -> Result<f64> {
    let dec = svd_full(m);
    coherence_from_decomposition(&dec, r)
}

pub fn coherence_from_decomposition(dec: &SpectralDecomposition, r: usize) -> Result<f64> {
    check_rank(dec, r)?;
    let p = Projector::from_basis_unchecked(dec.top_basis(r));
    Ok(dec.dim() as f64 / r as f64 * p.max_diagonal())
}

/// max over singular vectors with nonzero singular value of n * ||u||_inf^2.
///
/// Depends on the basis chosen inside repeated singular values.
pub fn basic_coherence(m: &SymMatrix) -> f64 {
    let dec = svd_full(m);
    let n = dec.dim();
    let rank = dec.numerical_rank();
    let mut best: f64 = 0.0;
    for k in 0..rank {
        let inf = dec.u.column(k).amax();
        best = best.max(n as f64 * inf * inf);
    }
    best
}

/// Rank-r coherence of a rectangular matrix: max of the left and right coherences.
pub fn rect_coherence_r(svd: &RectSvd, r: usize) -> Result<f64> {
    let k = svd.sigma.len();
    let cut = 1e-10 * svd.sigma.first().copied().unwrap_or(0.0);
    let available = svd.sigma.iter().filter(|&&s| s > cut).count();
    if r == 0 || r > available || r > k {
        return Err(Error::Rank { requested: r, available });
    }
    let (n, m) = (svd.u.nrows(), svd.v.nrows());
    let left = Projector::from_basis_unchecked(svd.u.columns(0, r).into_owned()).max_diagonal();
    let right = Projector::from_basis_unchecked(svd.v.columns(0, r).into_owned()).max_diagonal();
    Ok((n as f64 / r as f64 * left).max(m as f64 / r as f64 * right))
}

/// sigma_r - sigma_{r+1}; for r = n this is sigma_n.
pub fn spectral_gap(dec: &SpectralDecomposition, r: usize) -> Result<f64> {
    if r == 0 || r > dec.dim() {
        return Err(Error::Rank { requested: r, available: dec.dim() });
    }
    Ok(dec.sigma_at(r) - dec.sigma_at(r + 1))
}

/// ||(I - P_hat) U|| in spectral norm.
pub fn subspace_closeness(p_hat: &Projector, u: &DMatrix<f64>) -> Result<f64> {
    if p_hat.dim() != u.nrows() {
        return input("dimension mismatch");
    }
    let b = p_hat.basis();
    let resid = u - b * (b.transpose() * u);
    Ok(spectral_norm(&resid))
}

/// sqrt of the entrywise l1 norm of (B - A)(B - A)^T.
pub fn adjacency_distance(a: &SymMatrix, b: &SymMatrix) -> Result<f64> {
    let e = b.sub(a)?.into_matrix();
    Ok(entrywise_l1(&(&e * e.transpose())).sqrt())
}

pub(crate) fn entrywise_l1(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|x| x.abs()).sum()
}

/// [[0, B], [B^T, 0]] for an n x m matrix B.
pub fn symmetrize_embed(b: &DMatrix<f64>) -> Result<SymMatrix> {
    let (n, m) = b.shape();
    if n == 0 || m == 0 {
        return input("empty matrix");
    }
    let mut out = DMatrix::zeros(n + m, n + m);
    out.view_mut((0, n), (n, m)).copy_from(b);
    out.view_mut((n, 0), (m, n)).copy_from(&b.transpose());
    SymMatrix::new(out)
}
