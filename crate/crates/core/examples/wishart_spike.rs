//! Spiked rectangular model: PCA vs the private projector.
//!
//! cargo run --release --example wishart_spike

use coherent_dp::dp::{PrivacyParams, SeededRng};
use coherent_dp::estimator::{private_projector_rect, EstimatorConstants};
use coherent_dp::experiments::{gen_wishart_spike, WishartSpikeSpec};
use coherent_dp::spectral::{rect_coherence_r, rect_svd, subspace_closeness, Projector};

fn main() -> coherent_dp::Result<()> {
    let (n, m) = (50, 2000);
    let params = PrivacyParams::new(1.0, 1e-4, 1e-5)?;
    println!("{:>8} {:>8} {:>8} {:>10} {:>10} {:>8}", "beta", "gap", "mu_1", "pca", "private", "halted");
    for beta_c in [2.0, 10.0, 50.0, 250.0, 1250.0, 6250.0, 31250.0] {
        let beta = beta_c * (n as f64 / m as f64).sqrt();
        let spec = WishartSpikeSpec::delocalized(n, m, beta, 3);
        let mat = gen_wishart_spike(&spec, &mut SeededRng::new(11))?;
        let svd = rect_svd(&mat)?;
        let pca = Projector::from_basis(svd.u.columns(0, 1).into_owned(), 1e-8)?;
        let rel = private_projector_rect(&mat, 1, 2f64.sqrt(), &EstimatorConstants::default(), params, &mut SeededRng::new(12))?;
        println!(
            "{:>8.2} {:>8.1} {:>8.2} {:>10.3} {:>10.3} {:>8}",
            beta,
            svd.sigma_at(1) - svd.sigma_at(2),
            rect_coherence_r(&svd, 1)?,
            subspace_closeness(&pca, &spec.signal_matrix())?,
            subspace_closeness(&rel.projector, &spec.signal_matrix())?,
            rel.used_default_random_subspace,
        );
    }
    Ok(())
}
