//! Correlation-rounding Max-Cut on the Petersen graph against brute force.
//!
//! cargo run --release --example max_cut

use coherent_dp::csp::{brute_force_max_cut, solve_max_cut, SolverOptions};
use coherent_dp::dp::SeededRng;
use coherent_dp::graph::{normalized_adjacency, WeightedGraph};

fn main() -> coherent_dp::Result<()> {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5, 1.0));
        edges.push((i, i + 5, 1.0));
        edges.push((i + 5, (i + 2) % 5 + 5, 1.0));
    }
    let g = WeightedGraph::from_edges(10, &edges)?;
    let a_bar = normalized_adjacency(&g).into_matrix();
    let (opt, _) = brute_force_max_cut(&g)?;

    for seed in 0..5 {
        let sol = solve_max_cut(&g, 2, 0.25, &g.degrees(), &a_bar, &SolverOptions::default(), &mut SeededRng::new(seed))?;
        let d = &sol.diagnostics;
        println!(
            "seed {seed}: cut {} / {opt}  sdp bound {:.3}  rounds {}  GC {:.4} (target {:.4})",
            sol.value, d.sdp_upper_bound, d.rounds, d.global_correlation, d.eta_bar
        );
    }
    Ok(())
}
