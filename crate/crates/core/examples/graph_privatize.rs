//! Edge-private synthetic graphs under the default and a relaxed configuration.
//!
//! cargo run --release --example graph_privatize

use coherent_dp::dp::{PrivacyParams, SeededRng};
use coherent_dp::estimator::EstimatorConstants;
use coherent_dp::experiments::complete_graph;
use coherent_dp::graph::{normalized_adjacency, private_synthetic_graph, ThresholdRankConfig, WeightedGraph};
use coherent_dp::spectral::{adjacency_distance, best_rank_r};

fn main() -> coherent_dp::Result<()> {
    let n = 80;
    let heavy: Vec<_> = complete_graph(n).edges().into_iter().map(|(u, v, w)| (u, v, 160.0 * w)).collect();
    let g = WeightedGraph::from_edges(n, &heavy)?;
    println!("n = {n}, min degree = {}", g.min_degree());

    let params = PrivacyParams::new(2.0, 1e-4, 1e-6)?;
    let relaxed = ThresholdRankConfig { degree_noise_factor: 1.0, window_factor: 1.0, constants: EstimatorConstants::unit() };
    let a_best = best_rank_r(&normalized_adjacency(&g).into_matrix(), 1)?;

    for (name, cfg) in [("default", ThresholdRankConfig::default()), ("relaxed", relaxed)] {
        let rel = private_synthetic_graph(&g, 1, params, &cfg, &mut SeededRng::new(3))?;
        println!("[{name}] d_min_hat = {:?}", rel.d_min_hat);
        match (&rel.graph, &rel.a_hat) {
            (Some(syn), Some(a_hat)) => {
                println!("  synthetic graph: {} edges, total weight {:.0}", syn.edges().len(), syn.degrees().iter().sum::<f64>() / 2.0);
                println!("  projection converged: {:?}", rel.projection_converged);
                println!("  adjacency distance to best rank-1: {:.4}", adjacency_distance(&a_best, a_hat)?);
            }
            _ => println!("  halted at {}", rel.halted_stage.as_deref().unwrap_or("?")),
        }
        let (eps, delta) = rel.ledger.compose();
        println!("  ledger: {} entries, eps {eps}, delta {delta:e}", rel.ledger.entries.len());
    }
    Ok(())
}
