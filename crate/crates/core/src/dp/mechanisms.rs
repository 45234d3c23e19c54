use super::params::PrivacyParams;
use super::rng::SeededRng;
use crate::error::{input, Result};

/// Standard deviation of the Gaussian mechanism: Delta * sqrt(ln(2/delta)) / epsilon.
pub fn noise_scale_of(params: &PrivacyParams, l2_sensitivity: f64) -> Result<f64> {
    params.check_gaussian_regime()?;
    if !(l2_sensitivity.is_finite() && l2_sensitivity >= 0.0) {
        return input("sensitivity must be finite and non-negative");
    }
    Ok(l2_sensitivity * (2.0 / params.delta).ln().sqrt() / params.epsilon)
}

/// Adds i.i.d. Gaussian noise calibrated to the l2 sensitivity.
pub fn gaussian_mechanism(
    value: &[f64],
    l2_sensitivity: f64,
    params: &PrivacyParams,
    rng: &mut SeededRng,
) -> Result<Vec<f64>> {
    let std = noise_scale_of(params, l2_sensitivity)?;
    check_finite(value)?;
    Ok(value.iter().map(|v| v + rng.gaussian(std)).collect())
}

/// Adds i.i.d. Laplace noise with scale l1_sensitivity / epsilon.
pub fn laplace_mechanism(
    value: &[f64],
    l1_sensitivity: f64,
    epsilon: f64,
    rng: &mut SeededRng,
) -> Result<Vec<f64>> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return input("epsilon must be positive");
    }
    if !(l1_sensitivity.is_finite() && l1_sensitivity >= 0.0) {
        return input("sensitivity must be finite and non-negative");
    }
    check_finite(value)?;
    let b = l1_sensitivity / epsilon;
    Ok(value.iter().map(|v| v + rng.laplace(b)).collect())
}

/// Multiplicative release exp(ln v + Lap(ln a / epsilon)) for values whose
/// neighbours differ by a factor of at most a.
pub fn log_sensitivity_mechanism(value: f64, a: f64, epsilon: f64, rng: &mut SeededRng) -> Result<f64> {
    if !(value.is_finite() && value > 0.0) {
        return input("value must be positive");
    }
    if !(a.is_finite() && a >= 1.0) {
        return input("multiplicative sensitivity must be at least 1");
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return input("epsilon must be positive");
    }
    let noise = rng.laplace(a.ln() / epsilon);
    if noise == 0.0 {
        return Ok(value);
    }
    Ok((value.ln() + noise).exp())
}

fn check_finite(v: &[f64]) -> Result<()> {
    if v.iter().any(|x| !x.is_finite()) {
        return input("value has non-finite entries");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_formula() {
        let p = PrivacyParams::new(1.0, 1e-5, 0.0).unwrap();
        let s = noise_scale_of(&p, 1.0).unwrap();
        assert!((s - (2e5f64).ln().sqrt()).abs() < 1e-12);
        assert!((s - 3.49).abs() < 0.01);
    }

    #[test]
    fn rejects_large_epsilon() {
        let p = PrivacyParams::new(2.0, 1e-5, 0.0).unwrap();
        assert!(noise_scale_of(&p, 1.0).is_err());
    }

    #[test]
    fn identity_without_noise() {
        let mut rng = SeededRng::new(3).without_noise();
        let p = PrivacyParams::new(0.5, 1e-3, 0.0).unwrap();
        assert_eq!(gaussian_mechanism(&[1.0, -2.0], 1.0, &p, &mut rng).unwrap(), vec![1.0, -2.0]);
        assert_eq!(laplace_mechanism(&[4.0], 1.0, 0.5, &mut rng).unwrap(), vec![4.0]);
        assert_eq!(log_sensitivity_mechanism(2.5, 2.0, 1.0, &mut rng).unwrap(), 2.5_f64.ln().exp());
    }
}
