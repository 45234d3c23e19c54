//! Coherence of delocalized and localized low-rank matrices, exact and private.
//!
//! cargo run --release --example coherence

use coherent_dp::dp::{BudgetLedger, PrivacyParams, SeededRng};
use coherent_dp::estimator::{private_coherence, EstimatorConstants};
use coherent_dp::experiments::planted_rank_r;
use coherent_dp::spectral::{basic_coherence, coherence_r, symmetrize_embed, SymMatrix};

fn main() -> coherent_dp::Result<()> {
    let (n, r) = (64, 2);
    let mut rng = SeededRng::new(5);
    let params = PrivacyParams::new(1.0, 1e-5, 1e-6)?;
    for localized in [false, true] {
        let b = planted_rank_r(n, n, r, 1e4, localized, &mut rng);
        let sym = SymMatrix::symmetrized((&b + b.transpose()) * 0.5, 1e-9)?;
        let mut ledger = BudgetLedger::new();
        let private =
            private_coherence(&sym, r, 1.0, &EstimatorConstants::default(), params, &mut SeededRng::new(9), &mut ledger)?;
        println!(
            "{:<12} mu_r {:>7.3}  basic {:>7.3}  embedded mu_r {:>7.3}  private {:?}",
            if localized { "localized" } else { "delocalized" },
            coherence_r(&sym, r)?,
            basic_coherence(&sym),
            coherence_r(&symmetrize_embed(&b)?, 2 * r)?,
            private,
        );
    }
    println!("range of mu_r: [1, n/r] = [1, {}]", n / r);
    Ok(())
}
