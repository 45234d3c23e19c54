use nalgebra::DMatrix;

use super::bounds::{estimator_analytic_bound, hp_analytic_bound, wishart_analytic_pair};
use super::config::ExperimentConfig;
use super::generators::{gen_gnp, gen_planted_lowrank, gen_two_block, gen_wishart_spike, planted_biclique, WishartSpikeSpec};
use super::report::{mean, quantile, ExperimentReport, TrialLedger};
use crate::csp::{dp_max_cut, nonprivate_max_cut_pipeline, solve_max_cut, DpSolverConfig, Problem};
use crate::dp::{PrivacyParams, SeededRng};
use crate::error::{input, Result};
use crate::estimator::{coherence_gaussian_check, private_projector_rect, EstimatorConstants};
use crate::graph::{normalized_adjacency, ThresholdRankConfig, WeightedGraph};
use crate::spectral::{coherence_r, rect_coherence_r, rect_svd, svd_full, subspace_closeness, Projector, SymMatrix};

pub const EXPERIMENTS: [&str; 4] = ["wishart", "coherence-stability", "conjecture-probe", "dp-maxcut-bench"];

pub fn run_experiment(name: &str, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    match name {
        "wishart" => run_wishart_experiment(cfg),
        "coherence-stability" => run_coherence_stability(cfg),
        "conjecture-probe" => run_conjecture_probe(cfg),
        "dp-maxcut-bench" => run_dp_maxcut_bench(cfg),
        other => input(format!("unknown experiment '{other}', expected one of {EXPERIMENTS:?}")),
    }
}

/// `constants = default | unit`, then per-constant overrides `c_gap`, `c_coherence`, `c_projector`, `c_low_rank`.
pub fn constants_from(cfg: &ExperimentConfig) -> Result<EstimatorConstants> {
    let mut c = match cfg.raw("constants").unwrap_or("default") {
        "default" => EstimatorConstants::default(),
        "unit" => EstimatorConstants::unit(),
        other => return input(format!("constants must be default or unit, got {other}")),
    };
    c.gap = cfg.get("c_gap", c.gap)?;
    c.coherence = cfg.get("c_coherence", c.coherence)?;
    c.projector = cfg.get("c_projector", c.projector)?;
    c.low_rank = cfg.get("c_low_rank", c.low_rank)?;
    c.validate()?;
    Ok(c)
}

fn params_from(cfg: &ExperimentConfig, eps: f64, delta: f64, p_ratio: f64) -> Result<PrivacyParams> {
    let epsilon = cfg.get("epsilon", eps)?;
    let delta = cfg.get("delta", delta)?;
    let p_fail = cfg.get("p_fail", delta / p_ratio)?;
    PrivacyParams::new(epsilon, delta, p_fail)
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Private top-1 subspace of the spiked model against PCA and the two analytic bounds.
///
/// Keys: n, m (lists), beta_c (beta = beta_c sqrt(n/m)), epsilon, delta, p_fail,
/// delta_adj, trials, seed, signal = delocalized | localized, constants.
pub fn run_wishart_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let ns: Vec<usize> = cfg.list("n", &[50])?;
    let ms: Vec<usize> = cfg.list("m", &[2000])?;
    let beta_c: f64 = cfg.get("beta_c", 10.0)?;
    let params = params_from(cfg, 1.0, 1e-4, 10.0)?;
    let delta_adj: f64 = cfg.get("delta_adj", std::f64::consts::SQRT_2)?;
    let trials: usize = cfg.get("trials", 10)?;
    let seed: u64 = cfg.get("seed", 0)?;
    let signal = cfg.raw("signal").unwrap_or("delocalized").to_string();
    let constants = constants_from(cfg)?;
    let threshold: f64 = cfg.get("success_threshold", 0.3)?;
    let echo = cfg.echo(&[
        ("n", "50".into()),
        ("m", "2000".into()),
        ("beta_c", beta_c.to_string()),
        ("epsilon", params.epsilon.to_string()),
        ("delta", params.delta.to_string()),
        ("p_fail", params.p_fail.to_string()),
        ("delta_adj", delta_adj.to_string()),
        ("trials", trials.to_string()),
        ("seed", seed.to_string()),
        ("signal", signal.clone()),
        ("success_threshold", threshold.to_string()),
    ]);
    let mut report = ExperimentReport::new(
        "wishart",
        &[
            "n", "m", "beta", "trial", "sigma1", "sigma2", "gap", "gap_ratio", "mu1", "closeness_pca",
            "closeness_private", "halted", "bound_ours", "bound_hp", "model_ours", "model_hp",
        ],
        echo,
    );
    let root = SeededRng::new(seed);
    let mut point = 0u64;
    for &n in &ns {
        for &m in &ms {
            let beta = beta_c * (n as f64 / m as f64).sqrt();
            let spec = match signal.as_str() {
                "delocalized" => WishartSpikeSpec::delocalized(n, m, beta, seed ^ point),
                "localized" => WishartSpikeSpec::localized(n, m, beta, seed ^ point),
                other => return input(format!("signal must be delocalized or localized, got {other}")),
            };
            let u = spec.signal_matrix();
            let (model_ours, model_hp) = wishart_analytic_pair(n, m, beta, delta_adj, &params);
            for t in 0..trials {
                let rng = root.substream_indexed("wishart", point * 1_000_000 + t as u64);
                let mat = gen_wishart_spike(&spec, &mut rng.substream("matrix"))?;
                let svd = rect_svd(&mat)?;
                let (s1, s2) = (svd.sigma_at(1), svd.sigma_at(2));
                let mu1 = rect_coherence_r(&svd, 1)?;
                let pca = Projector::from_basis(svd.u.columns(0, 1).into_owned(), 1e-8)?;
                let closeness_pca = subspace_closeness(&pca, &u)?;
                let mut est_rng = rng.substream("estimator");
                let rel = private_projector_rect(&mat, 1, delta_adj, &constants, params, &mut est_rng)?;
                let closeness_private = subspace_closeness(&rel.projector, &u)?;
                report.push(vec![
                    n as f64,
                    m as f64,
                    beta,
                    t as f64,
                    s1,
                    s2,
                    s1 - s2,
                    (s1 - s2) / (beta * (m as f64).sqrt()),
                    mu1,
                    closeness_pca,
                    closeness_private,
                    flag(rel.used_default_random_subspace),
                    estimator_analytic_bound(s1 - s2, 1, mu1, delta_adj, &params),
                    hp_analytic_bound(s1, s2, 1, 1, mu1, n, m, &params),
                    model_ours,
                    model_hp,
                ]);
                report.ledgers.push(TrialLedger::new(report.rows.len() - 1, "private_projector", rel.ledger));
            }
            point += 1;
        }
    }
    let private = report.column("closeness_private").unwrap_or_default();
    let bounds = report.column("bound_ours").unwrap_or_default();
    let ratios: Vec<f64> = private.iter().zip(&bounds).map(|(c, b)| c / b).collect();
    report.summary.insert("success_rate".into(), mean(&private.iter().map(|&c| flag(c <= threshold)).collect::<Vec<_>>()));
    report.summary.insert("halt_rate".into(), mean(&report.column("halted").unwrap_or_default()));
    report.summary.insert("mean_closeness_private".into(), mean(&private));
    report.summary.insert("mean_closeness_pca".into(), mean(&report.column("closeness_pca").unwrap_or_default()));
    report.fitted_constants.insert("k_q90".into(), quantile(&ratios, 0.9));
    Ok(report)
}

/// n x m rank-r matrix scale * U V^T; `localized` confines U to the first max(r, n/16) rows.
pub fn planted_rank_r(n: usize, m: usize, r: usize, scale: f64, localized: bool, rng: &mut SeededRng) -> DMatrix<f64> {
    let support = if localized { r.max(n / 16) } else { n };
    let g = DMatrix::from_fn(n, r, |i, _| if i < support { rng.standard_normal() } else { 0.0 });
    let h = DMatrix::from_fn(m, r, |_, _| rng.standard_normal());
    let u = g.qr().q();
    let v = h.qr().q();
    scale * u * v.transpose()
}

/// Smallest C with lhs >= base / C - C additive.
fn lower_constant(lhs: f64, base: f64, additive: f64) -> f64 {
    if additive <= 0.0 {
        return if lhs > 0.0 { base / lhs } else { f64::INFINITY };
    }
    ((lhs * lhs + 4.0 * additive * base).sqrt() - lhs) / (2.0 * additive)
}

/// Coherence of A + W against r mu_r(A) over a grid.
///
/// Keys: n, r (lists), levels = delocalized,localized, trials, sigma, scale
/// (singular values are scale (sqrt n + sqrt m)), p, seed.
pub fn run_coherence_stability(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let ns: Vec<usize> = cfg.list("n", &[128, 256])?;
    let rs: Vec<usize> = cfg.list("r", &[1, 4])?;
    let levels: Vec<String> = cfg.list("levels", &["delocalized".to_string(), "localized".to_string()])?;
    let trials: usize = cfg.get("trials", 100)?;
    let sigma: f64 = cfg.get("sigma", 1.0)?;
    let scale: f64 = cfg.get("scale", 4.0)?;
    let p: f64 = cfg.get("p", 0.01)?;
    let seed: u64 = cfg.get("seed", 0)?;
    let echo = cfg.echo(&[
        ("n", "128,256".into()),
        ("r", "1,4".into()),
        ("levels", "delocalized,localized".into()),
        ("trials", trials.to_string()),
        ("sigma", sigma.to_string()),
        ("scale", scale.to_string()),
        ("p", p.to_string()),
        ("seed", seed.to_string()),
    ]);
    let mut report = ExperimentReport::new(
        "coherence-stability",
        &[
            "n", "r", "localized", "trial", "lhs", "base", "additive", "implied_upper_c", "implied_lower_c",
            "closeness", "lower_applicable",
        ],
        echo,
    );
    let root = SeededRng::new(seed);
    let mut c_upper: f64 = 0.0;
    let mut c_lower: f64 = 0.0;
    let mut lower_checked = 0usize;
    let mut ordering_ok = 0usize;
    let mut ordering_total = 0usize;
    for &n in &ns {
        for &r in &rs {
            let mut means = Vec::new();
            for level in &levels {
                let localized = match level.as_str() {
                    "delocalized" => false,
                    "localized" => true,
                    other => return input(format!("unknown coherence level {other}")),
                };
                let mut lhs_sum = 0.0;
                for t in 0..trials {
                    let mut rng = root.substream_indexed(&format!("coh-{n}-{r}-{level}"), t as u64);
                    let s = scale * 2.0 * (n as f64).sqrt() * sigma;
                    let a = planted_rank_r(n, n, r, s, localized, &mut rng);
                    let rep = coherence_gaussian_check(&a, sigma, r, r, p, &mut rng)?;
                    let lc = lower_constant(rep.lhs, rep.base, rep.additive);
                    c_upper = c_upper.max(rep.implied_upper_c);
                    if rep.lower_applicable {
                        c_lower = c_lower.max(lc);
                        lower_checked += 1;
                    }
                    lhs_sum += rep.lhs;
                    report.push(vec![
                        n as f64,
                        r as f64,
                        flag(localized),
                        t as f64,
                        rep.lhs,
                        rep.base,
                        rep.additive,
                        rep.implied_upper_c,
                        lc,
                        rep.closeness,
                        flag(rep.lower_applicable),
                    ]);
                }
                means.push((localized, lhs_sum / trials.max(1) as f64));
            }
            if let (Some(d), Some(l)) = (means.iter().find(|x| !x.0), means.iter().find(|x| x.0)) {
                ordering_total += 1;
                if l.1 >= d.1 {
                    ordering_ok += 1;
                }
            }
        }
    }
    report.fitted_constants.insert("c_upper".into(), c_upper);
    report.fitted_constants.insert("c_lower".into(), c_lower);
    report.summary.insert("lower_checked".into(), lower_checked as f64);
    report.summary.insert("ordering_preserved".into(), ordering_ok as f64);
    report.summary.insert("ordering_cells".into(), ordering_total as f64);
    Ok(report)
}

fn base_graph(kind: &str, n: usize) -> Result<(WeightedGraph, usize)> {
    match kind {
        "empty" => Ok((WeightedGraph::empty(n), 1)),
        "biclique" => Ok((planted_biclique(n, (n / 10).max(1), (n / 10).max(1))?, 2)),
        "halves" => Ok((planted_biclique(n, n / 2, n - n / 2)?, 2)),
        other => input(format!("unknown base graph {other}")),
    }
}

fn base_code(kind: &str) -> f64 {
    match kind {
        "empty" => 0.0,
        "biclique" => 1.0,
        _ => 2.0,
    }
}

fn safe_coherence(m: &SymMatrix, r: usize) -> f64 {
    coherence_r(m, r).unwrap_or(f64::NAN)
}

/// Exploratory: coherence of a low-rank graph united with G(n, p).
///
/// Keys: n, p (lists), bases = empty,biclique,halves, trials, seed.
pub fn run_conjecture_probe(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let ns: Vec<usize> = cfg.list("n", &[200])?;
    let ps: Vec<f64> = cfg.list("p", &[0.1, 0.3])?;
    let bases: Vec<String> =
        cfg.list("bases", &["empty".to_string(), "biclique".to_string(), "halves".to_string()])?;
    let trials: usize = cfg.get("trials", 5)?;
    let seed: u64 = cfg.get("seed", 0)?;
    let echo = cfg.echo(&[
        ("n", "200".into()),
        ("p", "0.1,0.3".into()),
        ("bases", "empty,biclique,halves".into()),
        ("trials", trials.to_string()),
        ("seed", seed.to_string()),
    ]);
    let mut report = ExperimentReport::new(
        "conjecture-probe",
        &[
            "n", "p", "base", "trial", "r", "mu_base", "mu_union", "polylog", "ratio", "mu_base_normalized",
            "mu_union_normalized", "ratio_normalized",
        ],
        echo,
    );
    report.exploratory = true;
    let root = SeededRng::new(seed);
    for &n in &ns {
        let polylog = (n as f64).ln().powi(2);
        for &p in &ps {
            for kind in &bases {
                let (base, r) = base_graph(kind, n)?;
                let base_adj = SymMatrix::new(base.adjacency().clone())?;
                let mu_base = safe_coherence(&base_adj, r);
                let mu_base_norm = safe_coherence(normalized_adjacency(&base).matrix(), r);
                for t in 0..trials {
                    let mut rng = root.substream_indexed(&format!("probe-{n}-{p}-{kind}"), t as u64);
                    let union = gen_planted_lowrank(&base, p, &mut rng)?;
                    let mu_union = safe_coherence(&SymMatrix::new(union.adjacency().clone())?, r);
                    let mu_union_norm = safe_coherence(normalized_adjacency(&union).matrix(), r);
                    report.push(vec![
                        n as f64,
                        p,
                        base_code(kind),
                        t as f64,
                        r as f64,
                        mu_base,
                        mu_union,
                        polylog,
                        (mu_union - polylog) / mu_base,
                        mu_base_norm,
                        mu_union_norm,
                        (mu_union_norm - polylog) / mu_base_norm,
                    ]);
                }
            }
        }
    }
    let ratio = report.column("ratio").unwrap_or_default();
    let finite: Vec<f64> = ratio.into_iter().filter(|x| x.is_finite()).collect();
    if !finite.is_empty() {
        report.summary.insert("max_ratio".into(), finite.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    }
    report.summary.insert("max_mu_union".into(), report.column("mu_union").unwrap_or_default().into_iter().fold(0.0, f64::max));
    Ok(report)
}

/// Private Max-Cut against the non-private pipeline and the relaxation bound.
///
/// Keys: n, families = gnp,two_block, p, p_in, p_out, rank, epsilon, delta,
/// p_fail, kappa, trials, seed, degree_noise_factor, window_factor, constants.
pub fn run_dp_maxcut_bench(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let ns: Vec<usize> = cfg.list("n", &[24])?;
    let families: Vec<String> = cfg.list("families", &["gnp".to_string(), "two_block".to_string()])?;
    let p: f64 = cfg.get("p", 0.5)?;
    let p_in: f64 = cfg.get("p_in", 0.1)?;
    let p_out: f64 = cfg.get("p_out", 0.9)?;
    let rank: usize = cfg.get("rank", 2)?;
    let params = params_from(cfg, 2.0, 1e-4, 100.0)?;
    let kappa: f64 = cfg.get("kappa", 0.1)?;
    let trials: usize = cfg.get("trials", 3)?;
    let seed: u64 = cfg.get("seed", 0)?;
    let defaults = ThresholdRankConfig::default();
    let threshold = ThresholdRankConfig {
        degree_noise_factor: cfg.get("degree_noise_factor", defaults.degree_noise_factor)?,
        window_factor: cfg.get("window_factor", defaults.window_factor)?,
        constants: constants_from(cfg)?,
    };
    let dp_cfg = DpSolverConfig { threshold, kappa, ..DpSolverConfig::default() };
    let echo = cfg.echo(&[
        ("n", "24".into()),
        ("families", "gnp,two_block".into()),
        ("p", p.to_string()),
        ("p_in", p_in.to_string()),
        ("p_out", p_out.to_string()),
        ("rank", rank.to_string()),
        ("epsilon", params.epsilon.to_string()),
        ("delta", params.delta.to_string()),
        ("p_fail", params.p_fail.to_string()),
        ("kappa", kappa.to_string()),
        ("trials", trials.to_string()),
        ("seed", seed.to_string()),
        ("degree_noise_factor", threshold.degree_noise_factor.to_string()),
        ("window_factor", threshold.window_factor.to_string()),
    ]);
    let mut report = ExperimentReport::new(
        "dp-maxcut-bench",
        &[
            "n", "family", "trial", "edges", "sdp_upper_bound", "value_nonprivate", "value_private", "halted",
            "ratio_nonprivate", "ratio_private", "eta", "sigma2",
        ],
        echo,
    );
    let root = SeededRng::new(seed);
    for &n in &ns {
        for (fi, family) in families.iter().enumerate() {
            for t in 0..trials {
                let rng = root.substream_indexed(&format!("bench-{n}-{family}"), t as u64);
                let g = match family.as_str() {
                    "gnp" => gen_gnp(n, p, &mut rng.substream("graph"))?,
                    "two_block" => gen_two_block(n, p_in, p_out, &mut rng.substream("graph"))?,
                    other => return input(format!("unknown graph family {other}")),
                };
                let a_bar = normalized_adjacency(&g).into_matrix();
                let sigma2 = svd_full(&a_bar).sigma_at(2);
                let exact = solve_max_cut(
                    &g,
                    rank,
                    sigma2.max(kappa),
                    &g.degrees(),
                    &a_bar,
                    &dp_cfg.solver,
                    &mut rng.substream("exact"),
                )?;
                let upper = exact.diagnostics.sdp_upper_bound;
                let np = nonprivate_max_cut_pipeline(Problem::MaxCut, &g, rank, &dp_cfg, &mut rng.substream("pipeline"))?;
                let dp = dp_max_cut(&g, rank, params, &dp_cfg, &mut rng.substream("pipeline"))?;
                let value_np = np.solution.as_ref().map(|s| s.value).unwrap_or(f64::NAN);
                let value_dp = dp.solution.as_ref().map(|s| s.value).unwrap_or(f64::NAN);
                report.push(vec![
                    n as f64,
                    fi as f64,
                    t as f64,
                    g.edges().len() as f64,
                    upper,
                    value_np,
                    value_dp,
                    flag(dp.solution.is_none()),
                    value_np / upper,
                    value_dp / upper,
                    dp.eta.unwrap_or(f64::NAN),
                    sigma2,
                ]);
                report.ledgers.push(TrialLedger::new(report.rows.len() - 1, "dp_max_cut", dp.ledger));
            }
        }
    }
    report.summary.insert("halt_rate".into(), mean(&report.column("halted").unwrap_or_default()));
    report.summary.insert("mean_ratio_nonprivate".into(), mean(&report.column("ratio_nonprivate").unwrap_or_default()));
    let private: Vec<f64> =
        report.column("ratio_private").unwrap_or_default().into_iter().filter(|x| x.is_finite()).collect();
    if !private.is_empty() {
        report.summary.insert("mean_ratio_private".into(), mean(&private));
    }
    Ok(report)
}
