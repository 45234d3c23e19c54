//! Runs a small experiment from a flat config and writes CSV and JSON.
//!
//! cargo run --release --example run_experiment -- [name] [out_dir]

use coherent_dp::experiments::{run_experiment, ExperimentConfig};

fn main() -> coherent_dp::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "coherence-stability".to_string());
    let out = args.next().map(Into::into).unwrap_or_else(|| std::env::temp_dir().join("coherent-dp-example"));

    let cfg = ExperimentConfig::parse(
        "# small grid
         n = 32, 64
         r = 1
         trials = 5
         seed = 3
         m = 200
         families = gnp
         bases = empty, halves",
    )?;
    let report = run_experiment(&name, &cfg)?;
    for (k, v) in &report.summary {
        println!("{k:<32} {v:.4}");
    }
    for (k, v) in &report.fitted_constants {
        println!("fitted {k:<25} {v:.4}");
    }
    println!("{} rows, {} ledgers", report.rows.len(), report.ledgers.len());
    let (json, csv) = report.write_to(&out)?;
    println!("wrote {} and {}", json.display(), csv.display());
    Ok(())
}
