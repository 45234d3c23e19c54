use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dp::SeededRng;
use crate::error::{input, Result};
use crate::spectral::SymMatrix;

/// Solver statistics attached to a pseudo-distribution produced by the SDP.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpStats {
    /// <objective, E[x x^T]>
    pub objective: f64,
    /// Certified upper bound on the SDP value from the dual iterate.
    pub upper_bound: f64,
    pub iterations: usize,
    pub feasibility_residual: f64,
}

/// Degree-2 pseudo-distribution over the indicators x_{i,l}, i in [n], l in [q].
///
/// `moments` is the (nq+1) x (nq+1) matrix of E[(1, x)(1, x)^T]; coordinate
/// 1 + i q + l holds x_{i,l}.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoDistribution2 {
    n: usize,
    q: usize,
    moments: DMatrix<f64>,
    pub conditioning: Vec<(usize, usize)>,
    pub stats: Option<SdpStats>,
}

/// Violations of the defining constraints.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct InvariantReport {
    pub min_eigenvalue: f64,
    pub booleanity: f64,
    pub partition: f64,
    pub normalization: f64,
}

impl InvariantReport {
    pub fn holds(&self, psd_tol: f64, eq_tol: f64) -> bool {
        self.min_eigenvalue >= -psd_tol
            && self.booleanity <= eq_tol
            && self.partition <= eq_tol
            && self.normalization <= eq_tol
    }
}

impl PseudoDistribution2 {
    pub fn from_moments(n: usize, q: usize, moments: DMatrix<f64>) -> Result<Self> {
        let dim = n * q + 1;
        if moments.nrows() != dim || moments.ncols() != dim {
            return input(format!("moment matrix must be {dim}x{dim}"));
        }
        let moments = SymMatrix::symmetrized(moments, 1e-9)?.into_matrix();
        Ok(PseudoDistribution2 { n, q, moments, conditioning: Vec::new(), stats: None })
    }

    /// Moments of a finite mixture of assignments with the given weights.
    pub fn from_distribution(n: usize, q: usize, support: &[(f64, Vec<usize>)]) -> Result<Self> {
        let total: f64 = support.iter().map(|s| s.0).sum();
        if !(total > 0.0) || support.iter().any(|s| s.0 < 0.0 || s.1.len() != n || s.1.iter().any(|&l| l >= q)) {
            return input("invalid distribution support");
        }
        let dim = n * q + 1;
        let mut y = DMatrix::zeros(dim, dim);
        for (w, x) in support {
            let mut v = nalgebra::DVector::zeros(dim);
            v[0] = 1.0;
            for (i, &l) in x.iter().enumerate() {
                v[1 + i * q + l] = 1.0;
            }
            y += (w / total) * &v * v.transpose();
        }
        Self::from_moments(n, q, y)
    }

    /// Independent variables with the given per-variable label marginals.
    pub fn product(n: usize, q: usize, marginals: &[Vec<f64>]) -> Result<Self> {
        if marginals.len() != n || marginals.iter().any(|m| m.len() != q) {
            return input("marginals must be n rows of length q");
        }
        let dim = n * q + 1;
        let mut m = nalgebra::DVector::zeros(dim);
        m[0] = 1.0;
        for i in 0..n {
            for l in 0..q {
                m[1 + i * q + l] = marginals[i][l];
            }
        }
        let mut y = &m * m.transpose();
        for i in 0..n {
            let base = 1 + i * q;
            for l in 0..q {
                for l2 in 0..q {
                    y[(base + l, base + l2)] = if l == l2 { marginals[i][l] } else { 0.0 };
                }
            }
        }
        Self::from_moments(n, q, y)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn moments(&self) -> &DMatrix<f64> {
        &self.moments
    }

    /// E[x_{i,l}] in coordinate i q + l.
    pub fn first_moments(&self) -> Vec<f64> {
        (1..self.moments.nrows()).map(|a| self.moments[(0, a)]).collect()
    }

    pub fn second_moments(&self) -> DMatrix<f64> {
        let k = self.n * self.q;
        self.moments.view((1, 1), (k, k)).into_owned()
    }

    /// E[x x^T] - E[x] E[x]^T.
    pub fn covariance(&self) -> DMatrix<f64> {
        let m = nalgebra::DVector::from_vec(self.first_moments());
        self.second_moments() - &m * m.transpose()
    }

    pub fn invariants(&self) -> InvariantReport {
        let eig = self.moments.clone().symmetric_eigen();
        let min_eigenvalue = eig.eigenvalues.min();
        let (n, q) = (self.n, self.q);
        let mut booleanity: f64 = 0.0;
        let mut partition: f64 = 0.0;
        for i in 0..n {
            let mut s = 0.0;
            for l in 0..q {
                let a = 1 + i * q + l;
                booleanity = booleanity.max((self.moments[(a, a)] - self.moments[(0, a)]).abs());
                s += self.moments[(0, a)];
            }
            partition = partition.max((s - 1.0).abs());
        }
        InvariantReport {
            min_eigenvalue,
            booleanity,
            partition,
            normalization: (self.moments[(0, 0)] - 1.0).abs(),
        }
    }

    /// True if every first moment is within `tol` of 0 or 1.
    pub fn is_integral(&self, tol: f64) -> bool {
        self.first_moments().iter().all(|&m| m.abs() <= tol || (m - 1.0).abs() <= tol)
    }
}

/// Correlation summary of a pseudo-distribution.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub global_correlation: f64,
    pub local_correlation: f64,
}

/// sum_{a,b} D_a D_b Cov(a, b)^2 / (sum_a D_a)^2 over the nq coordinates.
pub fn global_correlation(zeta: &PseudoDistribution2, d: &[f64]) -> Result<f64> {
    let cov = zeta.covariance();
    if d.len() != cov.nrows() || d.iter().any(|&x| !(x >= 0.0)) {
        return input("weights must be nq non-negative values");
    }
    let total: f64 = d.iter().sum();
    if total == 0.0 {
        return Ok(0.0);
    }
    let mut s = 0.0;
    for a in 0..d.len() {
        for b in 0..d.len() {
            s += d[a] * d[b] * cov[(a, b)] * cov[(a, b)];
        }
    }
    Ok(s / (total * total))
}

/// sum |A_ab| |Cov(a, b)| / sum |A_ab|.
pub fn local_correlation(zeta: &PseudoDistribution2, a: &DMatrix<f64>) -> Result<f64> {
    let cov = zeta.covariance();
    if a.shape() != cov.shape() {
        return input("matrix must be nq x nq");
    }
    let total: f64 = a.iter().map(|x| x.abs()).sum();
    if total == 0.0 {
        return Ok(0.0);
    }
    Ok(a.iter().zip(cov.iter()).map(|(x, c)| x.abs() * c.abs()).sum::<f64>() / total)
}

pub fn correlation_report(zeta: &PseudoDistribution2, d: &[f64], a: &DMatrix<f64>) -> Result<CorrelationReport> {
    Ok(CorrelationReport {
        global_correlation: global_correlation(zeta, d)?,
        local_correlation: local_correlation(zeta, a)?,
    })
}

/// Samples each variable's label from its first moments.
pub fn independent_rounding(zeta: &PseudoDistribution2, rng: &mut SeededRng) -> Vec<usize> {
    let m = zeta.first_moments();
    let q = zeta.q;
    (0..zeta.n)
        .map(|i| {
            let probs: Vec<f64> = (0..q).map(|l| m[i * q + l].max(0.0)).collect();
            let total: f64 = probs.iter().sum();
            if total <= 0.0 {
                return 0;
            }
            let mut u = rng.uniform() * total;
            for (l, p) in probs.iter().enumerate() {
                if u < *p {
                    return l;
                }
                u -= p;
            }
            probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
        })
        .collect()
}

/// Copy of `a` with the q x q diagonal blocks set to zero.
pub fn zero_diagonal_blocks(a: &DMatrix<f64>, q: usize) -> DMatrix<f64> {
    let mut out = a.clone();
    for i in 0..a.nrows() / q {
        out.view_mut((i * q, i * q), (q, q)).fill(0.0);
    }
    out
}

/// E <x_hat, A x_hat> under independent rounding, A with zero diagonal blocks.
pub fn expected_rounded_objective(zeta: &PseudoDistribution2, a: &DMatrix<f64>) -> f64 {
    let m = nalgebra::DVector::from_vec(zeta.first_moments());
    let a0 = zero_diagonal_blocks(a, zeta.q);
    (m.transpose() * a0 * &m)[(0, 0)]
}

/// Both sides of |E~<x x^T, A> - E<x_hat x_hat^T, A>| <= ||A||_1 LC_A, A's diagonal blocks zeroed.
pub fn rounding_error_bound(zeta: &PseudoDistribution2, a: &DMatrix<f64>) -> Result<(f64, f64)> {
    let a0 = zero_diagonal_blocks(a, zeta.q);
    let pseudo = zeta.second_moments().component_mul(&a0).sum();
    let lhs = (pseudo - expected_rounded_objective(zeta, &a0)).abs();
    let l1: f64 = a0.iter().map(|x| x.abs()).sum();
    Ok((lhs, l1 * local_correlation(zeta, &a0)?))
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LocalToGlobalReport {
    pub sqrt_global: f64,
    pub local: f64,
    pub threshold_rank: usize,
    /// (LC - tau) rho / sqrt(r)
    pub rhs: f64,
    pub holds: bool,
}

/// Checks sqrt(GC_D) >= (LC_A - tau) rho / sqrt(r), r the tau-threshold rank of D^{-1/2} A D^{-1/2}.
pub fn local_to_global_check(
    zeta: &PseudoDistribution2,
    a: &DMatrix<f64>,
    d: &[f64],
    tau: f64,
    rho: f64,
) -> Result<LocalToGlobalReport> {
    let k = d.len();
    if a.shape() != (k, k) {
        return input("A must be nq x nq");
    }
    let s: Vec<f64> = d.iter().map(|&x| crate::graph::inv_sqrt(x)).collect();
    let norm = SymMatrix::symmetrized(DMatrix::from_fn(k, k, |i, j| s[i] * a[(i, j)] * s[j]), 1e-9)?;
    let r = crate::graph::threshold_rank(&norm, tau);
    let gc = global_correlation(zeta, d)?;
    let lc = local_correlation(zeta, a)?;
    let rhs = if r == 0 { if lc > tau { f64::INFINITY } else { 0.0 } } else { (lc - tau) * rho / (r as f64).sqrt() };
    let sqrt_global = gc.sqrt();
    Ok(LocalToGlobalReport {
        sqrt_global,
        local: lc,
        threshold_rank: r,
        rhs,
        holds: lc <= tau || sqrt_global >= rhs - 1e-12,
    })
}
