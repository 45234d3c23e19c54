use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use coherent_dp::csp::{dp_max_cut, solve_max_cut, DpSolverConfig, SolverOptions};
use coherent_dp::dp::{BudgetLedger, PrivacyParams, SeededRng};
use coherent_dp::estimator::{private_low_rank, EstimatorConfig};
use coherent_dp::experiments::{run_experiment, ExperimentConfig, SCHEMA_VERSION};
use coherent_dp::graph::{
    normalized_adjacency, private_synthetic_graph, read_edge_list, write_edge_list, ThresholdRankConfig, WeightedGraph,
};
use coherent_dp::spectral::{read_matrix, svd_full, Tolerances};
use coherent_dp::{Error, Result};

#[derive(Parser)]
#[command(name = "coherent-dp", version, about = "Coherence-aware private spectral estimation and graph algorithms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Private rank-r approximation of a symmetric matrix.
    DpPca {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        /// Defaults to delta / 10.
        #[arg(long)]
        pfail: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        delta_adj: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Edge-private synthetic graph.
    DpGraph {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        /// Defaults to delta / 100.
        #[arg(long)]
        pfail: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Max-Cut by correlation rounding, private unless --no-privacy.
    DpMaxcut {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        rank: usize,
        /// Correlation parameter for --no-privacy; defaults to max(sigma_{r+1}, kappa).
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long, default_value_t = 0.1)]
        kappa: f64,
        #[arg(long, default_value_t = 2.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 1e-4)]
        delta: f64,
        /// Defaults to delta / 100.
        #[arg(long)]
        pfail: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        no_privacy: bool,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Runs one of: wishart, coherence-stability, conjecture-probe, dp-maxcut-bench.
    Experiment {
        name: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn ledger_json(ledger: &BudgetLedger) -> Value {
    let (e, d) = ledger.compose();
    json!({ "entries": ledger.entries, "total_epsilon": e, "total_delta": d })
}

fn emit(value: &Value, path: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn rows(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn load_graph(path: &Path) -> Result<WeightedGraph> {
    read_edge_list(BufReader::new(File::open(path)?))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::DpPca { input, rank, epsilon, delta, pfail, delta_adj, seed, json_out } => {
            let m = read_matrix(BufReader::new(File::open(&input)?), Tolerances::default().load_symmetry)?;
            let params = PrivacyParams::new(epsilon, delta, pfail.unwrap_or(delta / 10.0))?;
            let cfg = EstimatorConfig::new(rank, delta_adj, params);
            let out = private_low_rank(&m, &cfg, &mut SeededRng::new(seed))?;
            let report = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "dp-pca",
                "n": m.dim(),
                "rank": rank,
                "params": params,
                "delta_adj": delta_adj,
                "seed": seed,
                "gap_hat": out.gap_hat,
                "mu_hat": out.mu_hat,
                "used_default_random_subspace": out.used_default_random_subspace,
                "ledger": ledger_json(&out.ledger),
                "projector_basis": rows(out.p_hat.basis()),
                "m_hat": rows(out.m_hat.as_matrix()),
            });
            emit(&report, json_out.as_deref())
        }
        Command::DpGraph { input, rank, epsilon, delta, pfail, seed, out, report } => {
            let g = load_graph(&input)?;
            let params = PrivacyParams::new(epsilon, delta, pfail.unwrap_or(delta / 100.0))?;
            let rel = private_synthetic_graph(&g, rank, params, &ThresholdRankConfig::default(), &mut SeededRng::new(seed))?;
            if let Some(syn) = &rel.graph {
                write_edge_list(BufWriter::new(File::create(&out)?), syn)?;
            }
            let value = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "dp-graph",
                "n": g.n(),
                "rank": rank,
                "params": params,
                "seed": seed,
                "halted": rel.graph.is_none(),
                "halted_stage": rel.halted_stage,
                "d_min_hat": rel.d_min_hat,
                "used_default_random_subspace": rel.used_default_random_subspace,
                "projection_converged": rel.projection_converged,
                "synthetic_edges": rel.graph.as_ref().map(|s| s.edges().len()),
                "ledger": ledger_json(&rel.ledger),
            });
            if rel.graph.is_none() {
                eprintln!("halted at {}; no graph written", rel.halted_stage.as_deref().unwrap_or("?"));
            }
            emit(&value, report.as_deref())
        }
        Command::DpMaxcut { input, rank, eta, kappa, epsilon, delta, pfail, seed, no_privacy, json_out } => {
            let g = load_graph(&input)?;
            let mut rng = SeededRng::new(seed);
            let value = if no_privacy {
                let a_bar = normalized_adjacency(&g).into_matrix();
                let eta = eta.unwrap_or_else(|| svd_full(&a_bar).sigma_at(rank + 1).max(kappa));
                let sol = solve_max_cut(&g, rank, eta, &g.degrees(), &a_bar, &SolverOptions::default(), &mut rng)?;
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": "dp-maxcut",
                    "private": false,
                    "eta": eta,
                    "value": sol.value,
                    "side": sol.side,
                    "diagnostics": sol.diagnostics,
                })
            } else {
                if eta.is_some() {
                    eprintln!("--eta is ignored by the private solver");
                }
                let params = PrivacyParams::new(epsilon, delta, pfail.unwrap_or(delta / 100.0))?;
                let cfg = DpSolverConfig { kappa, ..DpSolverConfig::default() };
                let res = dp_max_cut(&g, rank, params, &cfg, &mut rng)?;
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": "dp-maxcut",
                    "private": true,
                    "params": params,
                    "halted": res.solution.is_none(),
                    "halted_stage": res.halted_stage,
                    "eta": res.eta,
                    "value": res.solution.as_ref().map(|s| s.value),
                    "synthetic_value": res.synthetic_value,
                    "side": res.solution.as_ref().map(|s| s.side.clone()),
                    "diagnostics": res.solution.as_ref().map(|s| s.diagnostics.clone()),
                    "ledger": ledger_json(&res.ledger),
                })
            };
            emit(&value, json_out.as_deref())
        }
        Command::Experiment { name, config, out } => {
            let cfg = match config {
                Some(p) => ExperimentConfig::load(&p)?,
                None => ExperimentConfig::default(),
            };
            let report = run_experiment(&name, &cfg)?;
            let (json_path, csv_path) = report.write_to(&out)?;
            println!("{}", json_path.display());
            println!("{}", csv_path.display());
            Ok(())
        }
    }
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e}");
        std::process::exit(match e {
            Error::Input(_) | Error::Rank { .. } => 2,
            _ => 1,
        });
    }
}
