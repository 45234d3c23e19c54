use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::instance::CspInstance;
use super::pseudo::{global_correlation, independent_rounding, local_correlation, PseudoDistribution2};
use super::sdp::{solve_moment_sdp, SdpOptions};
use crate::dp::SeededRng;
use crate::error::{input, Error, Result};
use crate::graph::WeightedGraph;
use crate::spectral::SymMatrix;

/// Knobs of the correlation-rounding solvers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub sdp: SdpOptions,
    /// C in eta_bar = C eta^2 r and in the round cap ceil(C / eta_bar).
    pub correlation_constant: f64,
    /// Independent rounding repetitions; default max(200, 50 n) capped at 10^4.
    pub rounding_trials: Option<usize>,
    /// Bisection acceptance: min side >= n/2 - slack; default sqrt(n ln(n + 1)).
    pub balance_slack: Option<f64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            sdp: SdpOptions::default(),
            correlation_constant: 1.0,
            rounding_trials: None,
            balance_slack: None,
        }
    }
}

impl SolverOptions {
    fn trials(&self, n: usize) -> usize {
        self.rounding_trials.unwrap_or_else(|| (50 * n).clamp(200, 10_000))
    }
}

/// Result of the conditioning loop.
#[derive(Clone, Debug)]
pub struct DriveResult {
    pub zeta: PseudoDistribution2,
    pub rounds: usize,
    pub global_correlation: f64,
    /// Whether the returned iterate has GC at most eta_bar.
    pub gc_satisfied: bool,
    /// Global correlation of every iterate, in order.
    pub history: Vec<f64>,
    /// Certified upper bound of the unconditioned relaxation.
    pub root_upper_bound: f64,
}

struct LabelProblem<'a> {
    n: usize,
    q: usize,
    objective: &'a DMatrix<f64>,
    balance: Option<usize>,
    weights: &'a [f64],
}

fn objective_of(z: &PseudoDistribution2) -> f64 {
    z.stats.map(|s| s.objective).unwrap_or(f64::NEG_INFINITY)
}

fn drive(p: &LabelProblem<'_>, eta_bar: f64, opts: &SolverOptions, rng: &mut SeededRng) -> Result<DriveResult> {
    if !(eta_bar > 0.0) {
        return input("eta_bar must be positive");
    }
    let (n, q) = (p.n, p.q);
    let max_rounds = ((opts.correlation_constant / eta_bar).ceil() as usize).min(n);
    let mut conditioning: Vec<(usize, usize)> = Vec::new();
    let mut zeta = solve_moment_sdp(n, q, p.objective, &conditioning, p.balance, &opts.sdp)?;
    let root_upper_bound = zeta.stats.map(|s| s.upper_bound).unwrap_or(f64::NAN);
    let mut history = Vec::new();
    let mut iterates: Vec<(PseudoDistribution2, f64)> = Vec::new();
    let mut stream = rng.substream("conditioning");
    let mut rounds = 0;
    loop {
        let gc = global_correlation(&zeta, p.weights)?;
        history.push(gc);
        iterates.push((zeta.clone(), gc));
        if gc <= eta_bar || rounds >= max_rounds {
            break;
        }
        let Some(var) = select_variable(&zeta, p.weights, eta_bar, &conditioning, &mut stream) else {
            break;
        };
        // Greedy label: the conditioned relaxation with the largest value.
        let first = zeta.first_moments();
        let mut best: Option<(PseudoDistribution2, f64, f64)> = None;
        for l in 0..q {
            let mut cond = conditioning.clone();
            cond.push((var, l));
            let cand = match solve_moment_sdp(n, q, p.objective, &cond, p.balance, &opts.sdp) {
                Ok(c) => c,
                Err(Error::Infeasible(_)) => continue,
                Err(e) => return Err(e),
            };
            let key = (objective_of(&cand), first[var * q + l]);
            let better = match &best {
                None => true,
                Some((_, o, m)) => key.0 > *o + 1e-9 * o.abs().max(1.0) || (key.0 >= *o - 1e-9 * o.abs().max(1.0) && key.1 > *m),
            };
            if better {
                best = Some((cand, key.0, key.1));
            }
        }
        let Some((next, _, _)) = best else { break };
        conditioning = next.conditioning.clone();
        zeta = next;
        rounds += 1;
    }
    let pick = iterates
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| {
            let fa = a.1 <= eta_bar;
            let fb = b.1 <= eta_bar;
            fa.cmp(&fb)
                .then(objective_of(&a.0).total_cmp(&objective_of(&b.0)))
                .then(ib.cmp(ia))
        })
        .map(|(i, _)| i)
        .expect("at least one iterate");
    let (zeta, gc) = iterates.swap_remove(pick);
    Ok(DriveResult { zeta, rounds, global_correlation: gc, gc_satisfied: gc <= eta_bar, history, root_upper_bound })
}

/// Samples a free variable by weight among those with an off-block covariance above eta_bar / 2.
fn select_variable(
    zeta: &PseudoDistribution2,
    weights: &[f64],
    eta_bar: f64,
    conditioning: &[(usize, usize)],
    rng: &mut SeededRng,
) -> Option<usize> {
    let (n, q) = (zeta.n(), zeta.q());
    let cov = zeta.covariance();
    let fixed: Vec<bool> = (0..n).map(|i| conditioning.iter().any(|c| c.0 == i)).collect();
    let candidates: Vec<usize> = (0..n)
        .filter(|&i| !fixed[i])
        .filter(|&i| {
            let mut best: f64 = 0.0;
            for l in 0..q {
                for b in 0..n * q {
                    if b / q != i {
                        best = best.max(cov[(i * q + l, b)].abs());
                    }
                }
            }
            best > eta_bar / 2.0
        })
        .collect();
    let candidates = if candidates.is_empty() {
        // Fall back to any undecided free variable.
        let m = zeta.first_moments();
        (0..n)
            .filter(|&i| !fixed[i] && (0..q).any(|l| m[i * q + l] > 1e-6 && m[i * q + l] < 1.0 - 1e-6))
            .collect()
    } else {
        candidates
    };
    if candidates.is_empty() {
        return None;
    }
    let w: Vec<f64> = candidates.iter().map(|&i| (0..q).map(|l| weights[i * q + l]).sum()).collect();
    let total: f64 = w.iter().sum();
    if !(total > 0.0) {
        return Some(candidates[0]);
    }
    let mut u = rng.uniform() * total;
    for (c, wi) in candidates.iter().zip(&w) {
        if u < *wi {
            return Some(*c);
        }
        u -= wi;
    }
    candidates.last().copied()
}

/// Conditions and re-solves until the global correlation w.r.t. `d` is at most `eta_bar`.
pub fn drive_down_correlation(
    instance: &CspInstance,
    objective: &SymMatrix,
    d: &[f64],
    eta_bar: f64,
    opts: &SolverOptions,
    rng: &mut SeededRng,
) -> Result<DriveResult> {
    check_weights(d, instance.n() * instance.q())?;
    let p = LabelProblem {
        n: instance.n(),
        q: instance.q(),
        objective: objective.as_matrix(),
        balance: None,
        weights: d,
    };
    drive(&p, eta_bar, opts, rng)
}

fn check_weights(d: &[f64], len: usize) -> Result<()> {
    if d.len() != len || d.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
        return input(format!("expected {len} non-negative weights"));
    }
    Ok(())
}

/// Diagnostics shared by the solvers.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    /// Relaxation value at the returned iterate, in units of the problem value.
    pub sdp_value: f64,
    /// Certified upper bound on the unconditioned relaxation, same units.
    pub sdp_upper_bound: f64,
    pub global_correlation: f64,
    pub local_correlation: f64,
    pub eta_bar: f64,
    pub rounds: usize,
    pub gc_satisfied: bool,
    pub trials: usize,
    /// False if no rounded sample met the acceptance rule (bisection balance).
    pub accepted: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CspSolution {
    pub assignment: Vec<usize>,
    pub value: f64,
    pub diagnostics: SolveDiagnostics,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CutSolution {
    /// side[i] is true when vertex i takes label 0.
    pub side: Vec<bool>,
    pub value: f64,
    /// min(|L|, |R|)
    pub min_side: usize,
    pub diagnostics: SolveDiagnostics,
}

fn run(
    p: &LabelProblem<'_>,
    a_tilde: &DMatrix<f64>,
    eta_bar: f64,
    opts: &SolverOptions,
    rng: &mut SeededRng,
    value: impl Fn(&[usize]) -> f64,
    accept: impl Fn(&[usize]) -> bool,
) -> Result<(Vec<usize>, f64, SolveDiagnostics)> {
    let result = drive(p, eta_bar, opts, rng)?;
    let trials = opts.trials(p.n);
    let mut stream = rng.substream("rounding");
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut fallback: Option<(Vec<usize>, f64, usize)> = None;
    for _ in 0..trials {
        let x = independent_rounding(&result.zeta, &mut stream);
        let v = value(&x);
        if accept(&x) {
            if best.as_ref().is_none_or(|b| v > b.1) {
                best = Some((x, v));
            }
        } else {
            let zeros = x.iter().filter(|&&l| l == 0).count();
            let bal = zeros.min(p.n - zeros);
            if fallback.as_ref().is_none_or(|f| bal > f.2 || (bal == f.2 && v > f.1)) {
                fallback = Some((x, v, bal));
            }
        }
    }
    let accepted = best.is_some();
    let (x, v) = match best {
        Some(b) => b,
        None => {
            let f = fallback.expect("at least one trial");
            (f.0, f.1)
        }
    };
    let diagnostics = SolveDiagnostics {
        sdp_value: objective_of(&result.zeta) / 2.0,
        sdp_upper_bound: result.root_upper_bound / 2.0,
        global_correlation: result.global_correlation,
        local_correlation: local_correlation(&result.zeta, a_tilde)?,
        eta_bar,
        rounds: result.rounds,
        gc_satisfied: result.gc_satisfied,
        trials,
        accepted,
    };
    Ok((x, v, diagnostics))
}

/// A (x) (J_q - I_q): the label extension of an n x n matrix for Max-Cut style objectives.
pub fn label_extend(a: &DMatrix<f64>, q: usize) -> DMatrix<f64> {
    let n = a.nrows();
    DMatrix::from_fn(n * q, n * q, |r, c| if r % q != c % q { a[(r / q, c / q)] } else { 0.0 })
}

fn extend_weights(d: &[f64], q: usize) -> Vec<f64> {
    d.iter().flat_map(|&x| std::iter::repeat_n(x, q)).collect()
}

fn eta_bar(opts: &SolverOptions, eta: f64, r: usize) -> Result<f64> {
    if !(eta > 0.0 && eta.is_finite()) || r == 0 {
        return input("need eta > 0 and r >= 1");
    }
    Ok(opts.correlation_constant * eta * eta * r as f64)
}

fn cut_from(x: &[usize], g: &WeightedGraph) -> (Vec<bool>, f64, usize) {
    let side: Vec<bool> = x.iter().map(|&l| l == 0).collect();
    let zeros = side.iter().filter(|&&s| s).count();
    let v = g.cut_value(&side);
    (side, v, zeros.min(x.len() - zeros))
}

/// Max-Cut by correlation rounding on the label-extended graph.
///
/// `d` holds n vertex weights and `a_tilde` is the n x n low-threshold-rank proxy.
pub fn solve_max_cut(
    g: &WeightedGraph,
    r: usize,
    eta: f64,
    d: &[f64],
    a_tilde: &SymMatrix,
    opts: &SolverOptions,
    rng: &mut SeededRng,
) -> Result<CutSolution> {
    cut_problem(g, r, eta, d, a_tilde, None, opts, rng)
}

/// Max-Bisection: adds sum_i x_{i,0} = floor(n/2) to the relaxation and accepts
/// roundings with min side at least n/2 - slack.
pub fn solve_max_bisection(
    g: &WeightedGraph,
    r: usize,
    eta: f64,
    d: &[f64],
    a_tilde: &SymMatrix,
    opts: &SolverOptions,
    rng: &mut SeededRng,
) -> Result<CutSolution> {
    cut_problem(g, r, eta, d, a_tilde, Some(g.n() / 2), opts, rng)
}

/// Default bisection slack sqrt(n ln(n + 1)).
pub fn default_balance_slack(n: usize) -> f64 {
    (n as f64 * ((n + 1) as f64).ln()).sqrt()
}

#[allow(clippy::too_many_arguments)]
fn cut_problem(
    g: &WeightedGraph,
    r: usize,
    eta: f64,
    d: &[f64],
    a_tilde: &SymMatrix,
    balance: Option<usize>,
    opts: &SolverOptions,
    rng: &mut SeededRng,
) -> Result<CutSolution> {
    let n = g.n();
    check_weights(d, n)?;
    if a_tilde.dim() != n {
        return input("a_tilde must be n x n");
    }
    let eta_bar = eta_bar(opts, eta, r)?;
    let inst = CspInstance::max_cut(g);
    let objective = inst.label_extended();
    let weights = extend_weights(d, 2);
    let a_ext = label_extend(a_tilde.as_matrix(), 2);
    let p = LabelProblem { n, q: 2, objective: &objective, balance, weights: &weights };
    let slack = opts.balance_slack.unwrap_or_else(|| default_balance_slack(n));
    let accept = |x: &[usize]| {
        balance.is_none() || {
            let zeros = x.iter().filter(|&&l| l == 0).count();
            zeros.min(n - zeros) as f64 >= n as f64 / 2.0 - slack
        }
    };
    let (x, _, diagnostics) = run(&p, &a_ext, eta_bar, opts, rng, |x| inst.value(x), accept)?;
    let (side, value, min_side) = cut_from(&x, g);
    Ok(CutSolution { side, value, min_side, diagnostics })
}

/// Max-2-CSP by correlation rounding; `d` has nq weights and `a_tilde` is nq x nq.
pub fn solve_max_2csp(
    instance: &CspInstance,
    r: usize,
    eta: f64,
    d: &[f64],
    a_tilde: &SymMatrix,
    opts: &SolverOptions,
    rng: &mut SeededRng,
) -> Result<CspSolution> {
    let (n, q) = (instance.n(), instance.q());
    check_weights(d, n * q)?;
    if a_tilde.dim() != n * q {
        return input("a_tilde must be nq x nq");
    }
    let eta_bar = eta_bar(opts, eta, r)?;
    let objective = instance.label_extended();
    let p = LabelProblem { n, q, objective: &objective, balance: None, weights: d };
    let (assignment, value, diagnostics) =
        run(&p, a_tilde.as_matrix(), eta_bar, opts, rng, |x| instance.value(x), |_| true)?;
    Ok(CspSolution { assignment, value, diagnostics })
}
