use serde::{Deserialize, Serialize};

use super::decomposition::{spectral_gap, svd_full, top_r_projector};
use super::matrix::SymMatrix;
use crate::error::{input, Result};

/// Outcome of the Frobenius-form subspace perturbation bound.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WedinReport {
    /// ||P - P'||_F
    pub lhs: f64,
    /// 4 ||E U||_F / gap
    pub rhs: f64,
    pub gap: f64,
    pub perturbation_norm: f64,
    /// Whether gap > 2 ||E||, the regime where the bound is guaranteed.
    pub hypothesis: bool,
    pub holds: bool,
}

pub fn wedin_bound_check(m: &SymMatrix, m_prime: &SymMatrix, r: usize) -> Result<WedinReport> {
    if m.dim() != m_prime.dim() {
        return input("dimension mismatch");
    }
    let dec = svd_full(m);
    let dec_p = svd_full(m_prime);
    let p = top_r_projector(&dec, r)?;
    let p_prime = top_r_projector(&dec_p, r)?;
    let gap = spectral_gap(&dec, r)?;
    let e = m_prime.sub(m)?;
    let eu = e.as_matrix() * p.basis();
    let lhs = (p.matrix() - p_prime.matrix()).norm();
    let rhs = if eu.norm() == 0.0 { 0.0 } else { 4.0 * eu.norm() / gap };
    let perturbation_norm = e.spectral_norm();
    Ok(WedinReport {
        lhs,
        rhs,
        gap,
        perturbation_norm,
        hypothesis: gap > 2.0 * perturbation_norm,
        holds: lhs <= rhs + 1e-9,
    })
}

/// Singular value perturbation: max_k |sigma_k(M') - sigma_k(M)| and sigma_1(M' - M).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeylReport {
    pub max_shift: f64,
    pub perturbation_norm: f64,
    pub holds: bool,
}

pub fn weyl_check(m: &SymMatrix, m_prime: &SymMatrix) -> Result<WeylReport> {
    let e = m_prime.sub(m)?;
    let a = svd_full(m);
    let b = svd_full(m_prime);
    let max_shift = a
        .sigma
        .iter()
        .zip(&b.sigma)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let perturbation_norm = e.spectral_norm();
    let scale = 1.0 + a.sigma[0].max(b.sigma[0]);
    Ok(WeylReport {
        max_shift,
        perturbation_norm,
        holds: max_shift <= perturbation_norm + 1e-10 * scale,
    })
}
