//! Max-3-Coloring of a small random graph as a 2-CSP.
//!
//! cargo run --release --example max_2csp

use coherent_dp::csp::{brute_force_csp, solve_max_2csp, write_csp, CspInstance, SolverOptions};
use coherent_dp::dp::SeededRng;
use coherent_dp::experiments::gen_gnp;
use coherent_dp::graph::{normalized_adjacency, WeightedGraph};

fn main() -> coherent_dp::Result<()> {
    let q = 3;
    let g = gen_gnp(8, 0.6, &mut SeededRng::new(21))?;
    let mut inst = CspInstance::new(g.n(), q)?;
    for (u, v, w) in g.edges() {
        for l in 0..q {
            for l2 in 0..q {
                if l != l2 {
                    inst.add_allowed(u, v, w, l, l2)?;
                }
            }
        }
    }
    let mut text = Vec::new();
    write_csp(&mut text, &inst)?;
    println!("instance: {} variables, {} labels, {} lines", inst.n(), q, text.iter().filter(|&&b| b == b'\n').count());

    // Weights and proxy come from the label-extended graph.
    let gamma = WeightedGraph::from_adjacency(inst.label_extended())?;
    let a = normalized_adjacency(&gamma).into_matrix();
    let sol = solve_max_2csp(&inst, 2, 0.25, &gamma.degrees(), &a, &SolverOptions::default(), &mut SeededRng::new(1))?;
    let (opt, best) = brute_force_csp(&inst)?;
    println!("rounded {:?} -> {}", sol.assignment, sol.value);
    println!("optimum {best:?} -> {opt}");
    println!("edges {}", g.edges().len());
    Ok(())
}
