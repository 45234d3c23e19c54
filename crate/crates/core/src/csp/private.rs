use serde::{Deserialize, Serialize};

use super::instance::CspInstance;
use super::solve::{solve_max_2csp, solve_max_bisection, solve_max_cut, CspSolution, CutSolution, SolverOptions};
use crate::dp::{BudgetLedger, PrivacyParams, SeededRng};
use crate::error::Result;
use crate::graph::{
    normalized_adjacency, private_synthetic_graph, synthesize_from_low_rank, SyntheticGraphRelease,
    ThresholdRankConfig, WeightedGraph,
};
use crate::spectral::{best_rank_r, svd_full, SymMatrix};

/// Which cut problem to solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Problem {
    MaxCut,
    MaxBisection,
}

/// Settings of the private solvers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DpSolverConfig {
    pub threshold: ThresholdRankConfig,
    pub solver: SolverOptions,
    /// Floor on the correlation parameter: eta = max(sigma_{r+1}(A_hat), kappa).
    pub kappa: f64,
}

impl Default for DpSolverConfig {
    fn default() -> Self {
        DpSolverConfig { threshold: ThresholdRankConfig::default(), solver: SolverOptions::default(), kappa: 0.1 }
    }
}

/// Output of a private cut solver. `solution` is None when a stage halted.
#[derive(Clone, Debug)]
pub struct DpCutResult {
    /// Cut found on the synthetic graph; `value` is its weight in the input graph.
    pub solution: Option<CutSolution>,
    pub synthetic_value: Option<f64>,
    pub synthetic: Option<WeightedGraph>,
    pub eta: Option<f64>,
    pub halted_stage: Option<String>,
    pub d_min_hat: Option<f64>,
    pub used_default_random_subspace: bool,
    pub projection_converged: Option<bool>,
    pub ledger: BudgetLedger,
}

/// Output of the private 2-CSP solver.
#[derive(Clone, Debug)]
pub struct DpCspResult {
    /// Assignment found on the synthetic instance; `value` is its value on the input.
    pub solution: Option<CspSolution>,
    pub synthetic_value: Option<f64>,
    pub eta: Option<f64>,
    pub halted_stage: Option<String>,
    pub d_min_hat: Option<f64>,
    pub used_default_random_subspace: bool,
    pub ledger: BudgetLedger,
}

struct Synthetic {
    graph: WeightedGraph,
    degrees: Vec<f64>,
    a_prime: SymMatrix,
    eta: f64,
    converged: bool,
}

fn finish(a_prime: SymMatrix, degrees: Vec<f64>, r: usize, kappa: f64) -> Result<Synthetic> {
    let (proj, graph) = synthesize_from_low_rank(&a_prime, &degrees)?;
    let eta = svd_full(&proj.matrix).sigma_at(r + 1).max(kappa);
    Ok(Synthetic { graph, degrees, a_prime, eta, converged: proj.converged })
}

fn from_release(rel: &mut SyntheticGraphRelease, r: usize, kappa: f64) -> Option<Synthetic> {
    let (graph, degrees, a_prime, a_hat) =
        (rel.graph.take()?, rel.degrees.take()?, rel.a_prime.take()?, rel.a_hat.as_ref()?);
    let eta = svd_full(a_hat).sigma_at(r + 1).max(kappa);
    Some(Synthetic { graph, degrees, a_prime, eta, converged: rel.projection_converged.unwrap_or(false) })
}

fn solve_cut(
    problem: Problem,
    g: &WeightedGraph,
    syn: &Synthetic,
    r: usize,
    opts: &SolverOptions,
    rng: &mut SeededRng,
) -> Result<(CutSolution, f64)> {
    let mut solver_rng = rng.substream("solver");
    let f = match problem {
        Problem::MaxCut => solve_max_cut,
        Problem::MaxBisection => solve_max_bisection,
    };
    let mut sol = f(&syn.graph, r, syn.eta, &syn.degrees, &syn.a_prime, opts, &mut solver_rng)?;
    let synthetic_value = sol.value;
    sol.value = g.cut_value(&sol.side);
    Ok((sol, synthetic_value))
}

fn dp_cut(
    problem: Problem,
    g: &WeightedGraph,
    r: usize,
    params: PrivacyParams,
    cfg: &DpSolverConfig,
    rng: &mut SeededRng,
) -> Result<DpCutResult> {
    let mut rel = private_synthetic_graph(g, r, params, &cfg.threshold, rng)?;
    let syn = from_release(&mut rel, r, cfg.kappa);
    let (solution, synthetic_value, eta, converged) = match &syn {
        Some(syn) => {
            let (sol, sv) = solve_cut(problem, g, syn, r, &cfg.solver, rng)?;
            (Some(sol), Some(sv), Some(syn.eta), Some(syn.converged))
        }
        None => (None, None, None, None),
    };
    Ok(DpCutResult {
        solution,
        synthetic_value,
        synthetic: syn.map(|s| s.graph),
        eta,
        halted_stage: rel.halted_stage,
        d_min_hat: rel.d_min_hat,
        used_default_random_subspace: rel.used_default_random_subspace,
        projection_converged: converged,
        ledger: rel.ledger,
    })
}

/// Edge-private Max-Cut on a low threshold-rank graph.
pub fn dp_max_cut(
    g: &WeightedGraph,
    r: usize,
    params: PrivacyParams,
    cfg: &DpSolverConfig,
    rng: &mut SeededRng,
) -> Result<DpCutResult> {
    dp_cut(Problem::MaxCut, g, r, params, cfg, rng)
}

/// Edge-private Max-Bisection.
pub fn dp_max_bisection(
    g: &WeightedGraph,
    r: usize,
    params: PrivacyParams,
    cfg: &DpSolverConfig,
    rng: &mut SeededRng,
) -> Result<DpCutResult> {
    dp_cut(Problem::MaxBisection, g, r, params, cfg, rng)
}

/// The private pipeline with exact degrees and the exact rank-r truncation.
pub fn nonprivate_max_cut_pipeline(
    problem: Problem,
    g: &WeightedGraph,
    r: usize,
    cfg: &DpSolverConfig,
    rng: &mut SeededRng,
) -> Result<DpCutResult> {
    let a_bar = normalized_adjacency(g).into_matrix();
    let a_prime = best_rank_r(&a_bar, r)?;
    let syn = finish(a_prime, g.degrees(), r, cfg.kappa)?;
    let (sol, sv) = solve_cut(problem, g, &syn, r, &cfg.solver, rng)?;
    Ok(DpCutResult {
        solution: Some(sol),
        synthetic_value: Some(sv),
        eta: Some(syn.eta),
        projection_converged: Some(syn.converged),
        synthetic: Some(syn.graph),
        halted_stage: None,
        d_min_hat: None,
        used_default_random_subspace: false,
        ledger: BudgetLedger::new(),
    })
}

/// Edge-private Max-2-CSP: the cut pipeline run on the label-extended graph.
pub fn dp_max_2csp(
    instance: &CspInstance,
    r: usize,
    params: PrivacyParams,
    cfg: &DpSolverConfig,
    rng: &mut SeededRng,
) -> Result<DpCspResult> {
    let (n, q) = (instance.n(), instance.q());
    let gamma = WeightedGraph::from_adjacency(instance.label_extended())?;
    let mut rel = private_synthetic_graph(&gamma, r, params, &cfg.threshold, rng)?;
    let Some(syn) = from_release(&mut rel, r, cfg.kappa) else {
        return Ok(DpCspResult {
            solution: None,
            synthetic_value: None,
            eta: None,
            halted_stage: rel.halted_stage,
            d_min_hat: rel.d_min_hat,
            used_default_random_subspace: false,
            ledger: rel.ledger,
        });
    };
    let synthetic = CspInstance::from_label_extended(n, q, syn.graph.adjacency())?;
    let mut solver_rng = rng.substream("solver");
    let mut sol = solve_max_2csp(&synthetic, r, syn.eta, &syn.degrees, &syn.a_prime, &cfg.solver, &mut solver_rng)?;
    let synthetic_value = sol.value;
    sol.value = instance.value(&sol.assignment);
    Ok(DpCspResult {
        solution: Some(sol),
        synthetic_value: Some(synthetic_value),
        eta: Some(syn.eta),
        halted_stage: None,
        d_min_hat: rel.d_min_hat,
        used_default_random_subspace: rel.used_default_random_subspace,
        ledger: rel.ledger,
    })
}

/// `dp_max_2csp` with exact degrees and the exact rank-r truncation.
pub fn nonprivate_max_2csp_pipeline(
    instance: &CspInstance,
    r: usize,
    cfg: &DpSolverConfig,
    rng: &mut SeededRng,
) -> Result<DpCspResult> {
    let (n, q) = (instance.n(), instance.q());
    let gamma = WeightedGraph::from_adjacency(instance.label_extended())?;
    let a_prime = best_rank_r(&normalized_adjacency(&gamma).into_matrix(), r)?;
    let syn = finish(a_prime, gamma.degrees(), r, cfg.kappa)?;
    let synthetic = CspInstance::from_label_extended(n, q, syn.graph.adjacency())?;
    let mut solver_rng = rng.substream("solver");
    let mut sol = solve_max_2csp(&synthetic, r, syn.eta, &syn.degrees, &syn.a_prime, &cfg.solver, &mut solver_rng)?;
    let synthetic_value = sol.value;
    sol.value = instance.value(&sol.assignment);
    Ok(DpCspResult {
        solution: Some(sol),
        synthetic_value: Some(synthetic_value),
        eta: Some(syn.eta),
        halted_stage: None,
        d_min_hat: None,
        used_default_random_subspace: false,
        ledger: BudgetLedger::new(),
    })
}
