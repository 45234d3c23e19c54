//! Splitting a budget across stages and composing the ledger.
//!
//! cargo run --example budget_ledger

use coherent_dp::dp::{gaussian_mechanism, noise_scale_of, BudgetLedger, PrivacyParams, SeededRng, StageStatus};

fn main() -> coherent_dp::Result<()> {
    let total = PrivacyParams::new(1.0, 1e-5, 1e-6)?;
    let mut ledger = BudgetLedger::new();
    let mut rng = SeededRng::new(42);

    let counts = [120.0, 37.0, 4.0];
    let stage = total.split(0.5, 0.5, 0.0);
    println!("noise std at sensitivity 1: {:.3}", noise_scale_of(&stage, 1.0)?);
    let noisy = gaussian_mechanism(&counts, 1.0, &stage, &mut rng)?;
    ledger.record("counts", stage, StageStatus::Executed);
    println!("counts {counts:?} -> {noisy:.1?}");

    // A gated stage that halts still pays its allocation; later stages are skipped.
    ledger.record("gate", total.split(0.25, 0.25, 1.0), StageStatus::Halted);
    ledger.record("release", total.split(0.25, 0.25, 0.0), StageStatus::Skipped);

    println!("{}", serde_json::to_string_pretty(&ledger)?);
    let (eps, delta) = ledger.compose();
    println!("composed: eps = {eps}, delta + p = {delta:e}");
    assert_eq!((eps, delta), (total.epsilon, total.delta + total.p_fail));
    Ok(())
}
