use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::normalized::normalized_adjacency;
use super::weighted::WeightedGraph;
use crate::dp::{BudgetLedger, PrivacyParams, SeededRng, StageStatus};
use crate::error::{input, Result};
use crate::estimator::{low_rank_from_decomposition, skipped_low_rank_ledger, EstimatorConfig, EstimatorConstants};
use crate::spectral::{svd_full, Projector, SymMatrix};

/// Adjacency bound of the normalized adjacency for a minimum-degree estimate,
/// 16 / (floor(d_hat) - 1). None when floor(d_hat) - 1 <= 1.
pub fn graph_edge_sensitivity(d_min_estimate: f64) -> Option<f64> {
    let k = d_min_estimate.floor() - 1.0;
    if !(k > 1.0) {
        return None;
    }
    Some(16.0 / k)
}

/// Constants of the threshold-rank privatizer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRankConfig {
    /// Variance of the min-degree noise is this times ln(4/delta + n) / eps^2.
    pub degree_noise_factor: f64,
    /// Lower end of the accepted min-degree window is this times
    /// sqrt(ln(4/delta) ln(4/delta + n)) / eps.
    pub window_factor: f64,
    pub constants: EstimatorConstants,
}

impl Default for ThresholdRankConfig {
    fn default() -> Self {
        ThresholdRankConfig {
            degree_noise_factor: 1e6,
            window_factor: 4e3,
            constants: EstimatorConstants::default(),
        }
    }
}

/// Output of the threshold-rank privatizer.
#[derive(Clone, Debug)]
pub struct ThresholdRankRelease {
    /// Rank-r private estimate of the normalized adjacency, or None on halt.
    pub matrix: Option<SymMatrix>,
    pub projector: Option<Projector>,
    pub d_min_hat: f64,
    pub delta_adj: Option<f64>,
    pub gap_hat: Option<f64>,
    pub mu_hat: Option<f64>,
    pub used_default_random_subspace: bool,
    pub ledger: BudgetLedger,
}

const MIN_DEGREE: &str = "min-degree";

/// Private rank-r estimate of the normalized adjacency of `g`.
///
/// Budget: min-degree release at (eps/2, delta/4) with halting mass delta/2,
/// estimator at (eps/2, delta/4, p).
pub fn private_threshold_rank_matrix(
    g: &WeightedGraph,
    r: usize,
    params: PrivacyParams,
    cfg: &ThresholdRankConfig,
    rng: &mut SeededRng,
) -> Result<ThresholdRankRelease> {
    let n = g.n();
    if r == 0 || r > n {
        return Err(crate::Error::Rank { requested: r, available: n });
    }
    cfg.constants.validate()?;
    let eps = params.epsilon;
    let delta = params.delta;
    let degree_budget = PrivacyParams { epsilon: eps / 2.0, delta: delta / 4.0, p_fail: delta / 2.0 };
    let est_params = params.split(0.5, 0.25, 1.0);
    let est_cfg = EstimatorConfig { rank: r, delta_adj: 1.0, params: est_params, constants: cfg.constants };
    est_cfg.validate(n)?;

    let log_term = (4.0 / delta + n as f64).ln();
    let std = (cfg.degree_noise_factor * log_term).sqrt() / eps;
    let mut stream = rng.substream(MIN_DEGREE);
    let d_min_hat = g.min_degree() + stream.gaussian(std);
    let lower = if rng.noise_off() {
        0.0
    } else {
        cfg.window_factor * ((4.0 / delta).ln() * log_term).sqrt() / eps
    };
    let upper = 2.0 * (n * n) as f64;
    let sensitivity = if d_min_hat >= lower && d_min_hat <= upper {
        graph_edge_sensitivity(d_min_hat)
    } else {
        None
    };
    let mut ledger = BudgetLedger::new();
    let Some(delta_adj) = sensitivity else {
        ledger = threshold_rank_ledger(params, StageStatus::Halted);
        return Ok(ThresholdRankRelease {
            matrix: None,
            projector: None,
            d_min_hat,
            delta_adj: None,
            gap_hat: None,
            mu_hat: None,
            used_default_random_subspace: false,
            ledger,
        });
    };
    ledger.record(MIN_DEGREE, degree_budget, StageStatus::Executed);
    let a_bar = normalized_adjacency(g).into_matrix();
    let dec = svd_full(&a_bar);
    let est_cfg = EstimatorConfig { delta_adj, ..est_cfg };
    let mut est_rng = rng.substream("estimator");
    let out = low_rank_from_decomposition(&a_bar, &dec, &est_cfg, &mut est_rng, "estimator/")?;
    ledger.append(out.ledger);
    Ok(ThresholdRankRelease {
        matrix: Some(out.m_hat),
        projector: Some(out.p_hat),
        d_min_hat,
        delta_adj: Some(delta_adj),
        gap_hat: out.gap_hat,
        mu_hat: out.mu_hat,
        used_default_random_subspace: out.used_default_random_subspace,
        ledger,
    })
}

/// Ledger of a threshold-rank run that stopped at the min-degree stage.
pub(crate) fn threshold_rank_ledger(params: PrivacyParams, status: StageStatus) -> BudgetLedger {
    let eps = params.epsilon;
    let delta = params.delta;
    let degree_budget = PrivacyParams { epsilon: eps / 2.0, delta: delta / 4.0, p_fail: delta / 2.0 };
    let mut ledger = BudgetLedger::new();
    ledger.record(MIN_DEGREE, degree_budget, status);
    ledger.append(skipped_low_rank_ledger(params.split(0.5, 0.25, 1.0), "estimator/"));
    ledger
}

/// Degrees plus N(0, ln(2/delta_s) / eps_s^2) noise at the stage budget (eps_s, delta_s).
///
/// With (eps_s, delta_s) = (eps/2, delta/2) the variance is 4 ln(4/delta) / eps^2.
/// None if any noisy degree is negative.
pub fn private_degree_profile(
    g: &WeightedGraph,
    stage: PrivacyParams,
    rng: &mut SeededRng,
    ledger: &mut BudgetLedger,
) -> Result<Option<Vec<f64>>> {
    stage.check_gaussian_regime()?;
    let std = (2.0 / stage.delta).ln().sqrt() / stage.epsilon;
    let mut stream = rng.substream("degree-profile");
    let noisy: Vec<f64> = g.degrees().into_iter().map(|d| d + stream.gaussian(std)).collect();
    let halted = noisy.iter().any(|&d| d < 0.0);
    let budget = PrivacyParams { p_fail: 0.0, ..stage };
    ledger.record("degree-profile", budget, if halted { StageStatus::Halted } else { StageStatus::Executed });
    Ok(if halted { None } else { Some(noisy) })
}

/// Result of projecting onto the feasible set.
#[derive(Clone, Debug)]
pub struct Projection {
    pub matrix: SymMatrix,
    pub radius: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// rho(A) = |1 - ||A 1|| / sqrt(n)|.
pub fn projection_radius(a: &SymMatrix) -> f64 {
    let n = a.dim();
    let ones = nalgebra::DVector::from_element(n, 1.0);
    (1.0 - (a.as_matrix() * ones).norm() / (n as f64).sqrt()).abs()
}

fn ball_project(x: &DMatrix<f64>, center: &DMatrix<f64>, radius: f64) -> DMatrix<f64> {
    let diff = SymMatrix::from_computed(x - center).into_matrix();
    let eig = diff.symmetric_eigen();
    if eig.eigenvalues.iter().all(|l| l.abs() <= radius) {
        return x.clone();
    }
    let clipped = eig.eigenvalues.map(|l| l.clamp(-radius, radius));
    let v = &eig.eigenvectors;
    center + v * DMatrix::from_diagonal(&clipped) * v.transpose()
}

/// Frobenius projection of A' onto {M >= 0 entrywise} intersected with
/// {||M - A'|| <= rho(A')} by Dykstra's alternating projections.
pub fn project_to_s(a_prime: &SymMatrix) -> Projection {
    project_to_s_with(a_prime, 1e-8, 500)
}

pub fn project_to_s_with(a_prime: &SymMatrix, tol: f64, max_iter: usize) -> Projection {
    let radius = projection_radius(a_prime);
    let center = a_prime.as_matrix();
    let n = a_prime.dim();
    let mut x = center.clone();
    let mut p = DMatrix::zeros(n, n);
    let mut q = DMatrix::zeros(n, n);
    let mut converged = false;
    let mut iterations = 0;
    for it in 1..=max_iter {
        iterations = it;
        let y = ball_project(&(&x + &p), center, radius);
        p = &x + &p - &y;
        let z = &y + &q;
        let x_new = z.map(|v| v.max(0.0));
        q = z - &x_new;
        let change = (&x_new - &x).norm();
        x = x_new;
        if change < tol {
            converged = true;
            break;
        }
    }
    Projection { matrix: SymMatrix::from_computed(x), radius, iterations, converged }
}

/// Weighted graph with adjacency D^{1/2} A D^{1/2}.
pub fn synthesize_graph(a_hat: &SymMatrix, d_hat: &[f64]) -> Result<WeightedGraph> {
    let n = a_hat.dim();
    if d_hat.len() != n {
        return input("degree vector length mismatch");
    }
    if d_hat.iter().any(|&d| !(d >= 0.0)) {
        return input("degrees must be non-negative");
    }
    let s: Vec<f64> = d_hat.iter().map(|d| d.sqrt()).collect();
    let a = a_hat.as_matrix();
    let scale = a.amax().max(1.0) * d_hat.iter().copied().fold(1.0, f64::max);
    let mut out = DMatrix::from_fn(n, n, |i, j| s[i] * a[(i, j)] * s[j]);
    for v in out.iter_mut() {
        if *v < 0.0 {
            if *v < -1e-12 * scale {
                return input(format!("synthesized weight {v} is negative"));
            }
            *v = 0.0;
        }
    }
    WeightedGraph::from_adjacency(SymMatrix::from_computed(out).into_matrix())
}

/// Right-hand side of the quadratic-form perturbation bound for x in [0, 1]^n.
pub fn quadratic_form_deviation_bound(
    x_inf: f64,
    gamma: f64,
    rho: f64,
    beta: f64,
    n: usize,
    degree_l1: f64,
) -> f64 {
    let n = n as f64;
    2.0 * (x_inf * x_inf + x_inf) * rho * beta * n
        + 2.0 * rho * x_inf * (beta * n * degree_l1).sqrt()
        + x_inf * gamma * degree_l1
}

/// Output of the synthetic-graph pipeline. The optional fields are None after a halt.
#[derive(Clone, Debug)]
pub struct SyntheticGraphRelease {
    pub graph: Option<WeightedGraph>,
    /// Noisy degree profile.
    pub degrees: Option<Vec<f64>>,
    /// Rank-r private estimate of the normalized adjacency.
    pub a_prime: Option<SymMatrix>,
    /// `a_prime` projected onto the feasible set.
    pub a_hat: Option<SymMatrix>,
    pub projection_converged: Option<bool>,
    pub d_min_hat: Option<f64>,
    pub used_default_random_subspace: bool,
    pub halted_stage: Option<String>,
    pub ledger: BudgetLedger,
}

fn prefixed(ledger: BudgetLedger, prefix: &str) -> BudgetLedger {
    let entries = ledger
        .entries
        .into_iter()
        .map(|mut e| {
            e.stage = format!("{prefix}{}", e.stage);
            e
        })
        .collect();
    BudgetLedger { entries }
}

/// Projects a rank-r estimate and rescales it by the degrees.
pub(crate) fn synthesize_from_low_rank(a_prime: &SymMatrix, degrees: &[f64]) -> Result<(Projection, WeightedGraph)> {
    let proj = project_to_s(a_prime);
    let graph = synthesize_graph(&proj.matrix, degrees)?;
    Ok((proj, graph))
}

/// Edge-private synthetic graph: degree profile at (eps/2, delta/2), threshold-rank
/// matrix at (eps/2, delta/2, p), projection and rescaling.
pub fn private_synthetic_graph(
    g: &WeightedGraph,
    r: usize,
    params: PrivacyParams,
    cfg: &ThresholdRankConfig,
    rng: &mut SeededRng,
) -> Result<SyntheticGraphRelease> {
    let mut ledger = BudgetLedger::new();
    let tr_params = params.split(0.5, 0.5, 1.0);
    let halted = |stage: &str, d_min_hat, ledger| SyntheticGraphRelease {
        graph: None,
        degrees: None,
        a_prime: None,
        a_hat: None,
        projection_converged: None,
        d_min_hat,
        used_default_random_subspace: false,
        halted_stage: Some(stage.to_string()),
        ledger,
    };
    let Some(degrees) = private_degree_profile(g, params.split(0.5, 0.5, 0.0), rng, &mut ledger)? else {
        ledger.append(prefixed(threshold_rank_ledger(tr_params, StageStatus::Skipped), "threshold-rank/"));
        return Ok(halted("degree-profile", None, ledger));
    };
    let mut tr_rng = rng.substream("threshold-rank");
    let tr = private_threshold_rank_matrix(g, r, tr_params, cfg, &mut tr_rng)?;
    ledger.append(prefixed(tr.ledger, "threshold-rank/"));
    let Some(a_prime) = tr.matrix else {
        return Ok(halted("threshold-rank/min-degree", Some(tr.d_min_hat), ledger));
    };
    let (proj, graph) = synthesize_from_low_rank(&a_prime, &degrees)?;
    Ok(SyntheticGraphRelease {
        graph: Some(graph),
        degrees: Some(degrees),
        a_prime: Some(a_prime),
        a_hat: Some(proj.matrix),
        projection_converged: Some(proj.converged),
        d_min_hat: Some(tr.d_min_hat),
        used_default_random_subspace: tr.used_default_random_subspace,
        halted_stage: None,
        ledger,
    })
}
