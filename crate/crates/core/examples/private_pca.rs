//! Private rank-r approximation of a symmetric matrix with a clear spectral gap.
//!
//! cargo run --release --example private_pca

use coherent_dp::dp::{PrivacyParams, SeededRng};
use coherent_dp::estimator::{private_low_rank, EstimatorConfig};
use coherent_dp::spectral::{best_rank_r, svd_full, SymMatrix};
use nalgebra::{DMatrix, DVector};

fn main() -> coherent_dp::Result<()> {
    let n = 60;
    let r = 2;
    let mut rng = SeededRng::new(7);

    // Two strong delocalized directions plus small symmetric noise.
    let q = DMatrix::from_fn(n, n, |_, _| rng.standard_normal()).qr().q();
    let mut spectrum = DVector::from_element(n, 0.0);
    spectrum[0] = 5000.0;
    spectrum[1] = -3000.0;
    for k in 2..n {
        spectrum[k] = rng.standard_normal();
    }
    let m = SymMatrix::symmetrized(&q * DMatrix::from_diagonal(&spectrum) * q.transpose(), 1e-9)?;

    let dec = svd_full(&m);
    println!("sigma_1..3 = {:.1} {:.1} {:.2}", dec.sigma[0], dec.sigma[1], dec.sigma[2]);

    let params = PrivacyParams::new(1.0, 1e-6, 1e-7)?;
    let cfg = EstimatorConfig::new(r, 1.0, params);
    let out = private_low_rank(&m, &cfg, &mut SeededRng::new(1))?;

    let best = best_rank_r(&m, r)?;
    let err = out.m_hat.sub(&best)?.spectral_norm();
    println!("gap_hat = {:?}", out.gap_hat);
    println!("mu_hat  = {:?}", out.mu_hat);
    println!("fell back to a random subspace: {}", out.used_default_random_subspace);
    println!("||M_hat - M_r|| = {err:.2}  (||M_r|| = {:.1})", best.spectral_norm());

    for e in &out.ledger.entries {
        println!("  {:<28} eps {:<8} delta {:<10.2e} p {:.2e} {:?}", e.stage, e.epsilon, e.delta, e.p_fail, e.status);
    }
    let (eps, delta) = out.ledger.compose();
    println!("total: eps {eps}, delta {delta:e}");
    Ok(())
}
