//! Max-Bisection of a two-block graph.
//!
//! cargo run --release --example max_bisection

use coherent_dp::csp::{default_balance_slack, solve_max_bisection, solve_max_cut, SolverOptions};
use coherent_dp::dp::SeededRng;
use coherent_dp::experiments::gen_two_block;
use coherent_dp::graph::normalized_adjacency;

fn main() -> coherent_dp::Result<()> {
    let n = 40;
    let g = gen_two_block(n, 0.1, 0.8, &mut SeededRng::new(2))?;
    let a_bar = normalized_adjacency(&g).into_matrix();
    let opts = SolverOptions::default();
    let d = g.degrees();

    let cut = solve_max_cut(&g, 2, 0.25, &d, &a_bar, &opts, &mut SeededRng::new(4))?;
    let bis = solve_max_bisection(&g, 2, 0.25, &d, &a_bar, &opts, &mut SeededRng::new(4))?;
    println!("total weight {}", d.iter().sum::<f64>() / 2.0);
    println!("max-cut:       value {:>5}  smaller side {}", cut.value, cut.min_side);
    println!("max-bisection: value {:>5}  smaller side {} (accept >= {:.1})", bis.value, bis.min_side, n as f64 / 2.0 - default_balance_slack(n));
    println!("bisection sdp bound {:.2}", bis.diagnostics.sdp_upper_bound);
    Ok(())
}
