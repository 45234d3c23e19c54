use crate::dp::PrivacyParams;

/// Delta sqrt(r mu_r + ln(1/delta)) / gap * sqrt(ln(1/delta)) / eps, constant 1.
pub fn estimator_analytic_bound(gap: f64, r: usize, mu_r: f64, delta_adj: f64, params: &PrivacyParams) -> f64 {
    if !(gap > 0.0) {
        return f64::INFINITY;
    }
    let ld = (1.0 / params.delta).ln();
    delta_adj * (r as f64 * mu_r + ld).sqrt() / gap * ld.sqrt() / params.epsilon
}

/// Noisy-power-method error with constant 1:
/// sqrt(r' mu_bar ln(n+m)) / gap * sqrt(L ln L) * sqrt(r') / (sqrt(r') - sqrt(r-1)) * sqrt(ln(1/delta)) / eps,
/// L = sigma_r ln(n+m) / gap, with ln L floored at 1.
#[allow(clippy::too_many_arguments)]
pub fn hp_analytic_bound(
    sigma_r: f64,
    sigma_r1: f64,
    r: usize,
    r_prime: usize,
    mu_bar: f64,
    n: usize,
    m: usize,
    params: &PrivacyParams,
) -> f64 {
    let gap = sigma_r - sigma_r1;
    if !(gap > 0.0) || r_prime < r || r == 0 {
        return f64::INFINITY;
    }
    let log_nm = ((n + m) as f64).ln();
    let l = sigma_r * log_nm / gap;
    let ll = l * l.max(std::f64::consts::E).ln();
    let rp = r_prime as f64;
    let oversample = rp.sqrt() / (rp.sqrt() - ((r - 1) as f64).sqrt());
    (rp * mu_bar * log_nm).sqrt() / gap * ll.sqrt() * oversample * (1.0 / params.delta).ln().sqrt() / params.epsilon
}

/// Large-m model of the spiked matrix: sigma_1 = sqrt(m (1 + beta)(1 + n/(m beta))),
/// sigma_2 = sqrt(m) + sqrt(n).
pub fn wishart_singular_model(n: usize, m: usize, beta: f64) -> (f64, f64) {
    let (n, m) = (n as f64, m as f64);
    let s1 = if beta > 0.0 { (m * (1.0 + beta) * (1.0 + n / (m * beta))).sqrt() } else { m.sqrt() + n.sqrt() };
    (s1, m.sqrt() + n.sqrt())
}

/// Both analytic bounds for the spiked model with mu = ln(n + m).
pub fn wishart_analytic_pair(n: usize, m: usize, beta: f64, delta_adj: f64, params: &PrivacyParams) -> (f64, f64) {
    let (s1, s2) = wishart_singular_model(n, m, beta);
    let mu = ((n + m) as f64).ln();
    (
        estimator_analytic_bound(s1 - s2, 1, mu, delta_adj, params),
        hp_analytic_bound(s1, s2, 1, 1, mu, n, m, params),
    )
}
