//! Symmetric matrices, singular subspaces, coherence and perturbation checks.

mod decomposition;
mod io;
mod matrix;
mod perturbation;

pub use decomposition::{
    adjacency_distance, basic_coherence, coherence_from_decomposition, coherence_r, rect_coherence_r,
    rect_svd, spectral_gap, subspace_closeness, svd_full, svd_full_with, symmetrize_embed,
    top_r_projector, RectSvd, SpectralDecomposition,
};
pub use io::{read_matrix, write_matrix};
pub use matrix::{spectral_norm, Projector, SymMatrix, Tolerances};
pub use perturbation::{wedin_bound_check, weyl_check, WedinReport, WeylReport};

/// Best rank-r approximation U_r (U_r^T M U_r) U_r^T.
pub fn best_rank_r(m: &SymMatrix, r: usize) -> crate::Result<SymMatrix> {
    let dec = svd_full(m);
    let p = top_r_projector(&dec, r)?;
    Ok(compress(m, p.basis(), None))
}

/// U (U^T M U + W) U^T, shared by the exact and private low-rank paths.
pub(crate) fn compress(
    m: &SymMatrix,
    basis: &nalgebra::DMatrix<f64>,
    noise: Option<&nalgebra::DMatrix<f64>>,
) -> SymMatrix {
    let mut core = basis.transpose() * m.as_matrix() * basis;
    if let Some(w) = noise {
        core += w;
    }
    SymMatrix::from_computed(basis * core * basis.transpose())
}
