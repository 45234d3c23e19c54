use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dp::SeededRng;
use crate::error::{input, Result};
use crate::spectral::{
    adjacency_distance, coherence_from_decomposition, rect_coherence_r, rect_svd, spectral_gap, svd_full,
    SymMatrix,
};

/// Multiplier in mu(M + E) <= (1 + KAPPA * Delta / gap) mu(M), valid when gap > 2 Delta.
pub const COHERENCE_KAPPA: f64 = 16.0;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoherenceSensitivityReport {
    pub mu: f64,
    pub mu_perturbed: f64,
    pub delta_adj: f64,
    pub gap: f64,
    pub kappa: f64,
    /// (1 + kappa Delta / gap) mu
    pub linear_bound: f64,
    /// (1 + 4 Delta / gap)^2 mu, the unlinearised form.
    pub square_bound: f64,
    /// gap > 2 Delta
    pub hypothesis: bool,
    pub holds: bool,
}

/// Compares mu_r(M + E) with the bound implied by the gap and the adjacency distance of E.
pub fn coherence_sensitivity_check(m: &SymMatrix, e: &SymMatrix, r: usize) -> Result<CoherenceSensitivityReport> {
    let mp = m.add(e)?;
    let dec = svd_full(m);
    let dec_p = svd_full(&mp);
    let mu = coherence_from_decomposition(&dec, r)?;
    let mu_perturbed = coherence_from_decomposition(&dec_p, r)?;
    let zero = SymMatrix::new(DMatrix::zeros(m.dim(), m.dim()))?;
    let delta_adj = adjacency_distance(&zero, e)?;
    let gap = spectral_gap(&dec, r)?;
    let ratio = delta_adj / gap;
    let linear_bound = (1.0 + COHERENCE_KAPPA * ratio) * mu;
    let square_bound = (1.0 + 4.0 * ratio).powi(2) * mu;
    let hypothesis = gap > 2.0 * delta_adj;
    Ok(CoherenceSensitivityReport {
        mu,
        mu_perturbed,
        delta_adj,
        gap,
        kappa: COHERENCE_KAPPA,
        linear_bound,
        square_bound,
        hypothesis,
        holds: !hypothesis || mu_perturbed <= linear_bound * (1.0 + 1e-9),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoherenceGaussianReport {
    /// r' mu_{r'}(A + W)
    pub lhs: f64,
    /// r mu_r(A)
    pub base: f64,
    /// r' + ln((n + m) / p)
    pub additive: f64,
    /// Smallest C satisfying the upper bound on this draw.
    pub implied_upper_c: f64,
    /// Max of the left and right top-r' subspace distances to those of A.
    pub closeness: f64,
    /// The lower bound is only claimed when closeness <= 0.99.
    pub lower_applicable: bool,
}

impl CoherenceGaussianReport {
    /// Whether lhs >= base / C - C * additive.
    pub fn lower_holds(&self, c: f64) -> bool {
        !self.lower_applicable || self.lhs >= self.base / c - c * self.additive
    }

    pub fn upper_holds(&self, c: f64) -> bool {
        self.lhs <= c * (self.base + self.additive)
    }
}

/// Coherence of A + W for a low-rank n x m matrix A and i.i.d. N(0, sigma^2) noise W.
pub fn coherence_gaussian_check(
    a: &DMatrix<f64>,
    sigma: f64,
    r: usize,
    r_prime: usize,
    p: f64,
    rng: &mut SeededRng,
) -> Result<CoherenceGaussianReport> {
    if r_prime < r {
        return input("r' must be at least r");
    }
    if !(p > 0.0 && p < 1.0) || !(sigma >= 0.0) {
        return input("need p in (0, 1) and sigma >= 0");
    }
    let (n, m) = a.shape();
    let svd_a = rect_svd(a)?;
    let base = r as f64 * rect_coherence_r(&svd_a, r)?;
    let noisy = a + DMatrix::from_fn(n, m, |_, _| sigma * rng.standard_normal());
    let svd_n = rect_svd(&noisy)?;
    let lhs = r_prime as f64 * rect_coherence_r(&svd_n, r_prime)?;
    let dist = |x: &DMatrix<f64>, y: &DMatrix<f64>| {
        let resid = y - x * (x.transpose() * y);
        crate::spectral::spectral_norm(&resid)
    };
    let ua = svd_a.u.columns(0, r).into_owned();
    let va = svd_a.v.columns(0, r).into_owned();
    let un = svd_n.u.columns(0, r_prime).into_owned();
    let vn = svd_n.v.columns(0, r_prime).into_owned();
    let closeness = dist(&un, &ua).max(dist(&vn, &va));
    let additive = r_prime as f64 + ((n + m) as f64 / p).ln();
    Ok(CoherenceGaussianReport {
        lhs,
        base,
        additive,
        implied_upper_c: lhs / (base + additive),
        closeness,
        lower_applicable: closeness <= 0.99,
    })
}
