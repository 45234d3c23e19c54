//! Edge-private Max-Cut against the same pipeline without noise.
//!
//! The relaxed threshold-rank configuration lets a graph of this size pass the
//! min-degree window; with the defaults the pipeline halts.
//!
//! cargo run --release --example dp_max_cut

use coherent_dp::csp::{dp_max_cut, nonprivate_max_cut_pipeline, DpSolverConfig, Problem};
use coherent_dp::dp::{PrivacyParams, SeededRng};
use coherent_dp::estimator::EstimatorConstants;
use coherent_dp::experiments::gen_two_block;
use coherent_dp::graph::{ThresholdRankConfig, WeightedGraph};

fn main() -> coherent_dp::Result<()> {
    let n = 40;
    let base = gen_two_block(n, 0.1, 0.9, &mut SeededRng::new(8))?;
    let heavy: Vec<_> = base.edges().into_iter().map(|(u, v, w)| (u, v, 100.0 * w)).collect();
    let g = WeightedGraph::from_edges(n, &heavy)?;
    let total: f64 = g.degrees().iter().sum::<f64>() / 2.0;

    let params = PrivacyParams::new(2.0, 1e-4, 1e-6)?;
    let cfg = DpSolverConfig {
        threshold: ThresholdRankConfig { degree_noise_factor: 1.0, window_factor: 1.0, constants: EstimatorConstants::unit() },
        ..DpSolverConfig::default()
    };

    let reference = nonprivate_max_cut_pipeline(Problem::MaxCut, &g, 2, &cfg, &mut SeededRng::new(1))?;
    println!("total weight {total}");
    if let Some(s) = &reference.solution {
        println!("non-private pipeline: cut {:.0} ({:.3} of total)", s.value, s.value / total);
    }
    let default_run = dp_max_cut(&g, 2, params, &DpSolverConfig::default(), &mut SeededRng::new(1))?;
    println!("default config: halted at {:?}", default_run.halted_stage);

    for seed in 0..2 {
        let res = dp_max_cut(&g, 2, params, &cfg, &mut SeededRng::new(seed))?;
        let (eps, delta) = res.ledger.compose();
        match &res.solution {
            Some(s) => println!(
                "seed {seed}: private cut {:.0} ({:.3} of total), eta {:.3}, ledger ({eps}, {delta:e})",
                s.value,
                s.value / total,
                res.eta.unwrap_or(f64::NAN)
            ),
            None => println!("seed {seed}: halted at {:?}, ledger ({eps}, {delta:e})", res.halted_stage),
        }
    }
    Ok(())
}
