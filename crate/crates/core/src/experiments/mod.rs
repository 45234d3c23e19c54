//! Generators, analytic baselines and experiment drivers with CSV/JSON reports.

mod bounds;
mod config;
mod generators;
mod report;
mod runners;

pub use bounds::{estimator_analytic_bound, hp_analytic_bound, wishart_analytic_pair, wishart_singular_model};
pub use config::ExperimentConfig;
pub use generators::{
    complete_graph, gap_report, gen_gnp, gen_planted_lowrank, gen_two_block, gen_wishart_spike, planted_biclique,
    GapReport, WishartSpikeSpec,
};
pub use report::{mean, quantile, ExperimentReport, TrialLedger, SCHEMA_VERSION};
pub use runners::{
    constants_from, planted_rank_r, run_conjecture_probe, run_coherence_stability, run_dp_maxcut_bench,
    run_experiment, run_wishart_experiment, EXPERIMENTS,
};
