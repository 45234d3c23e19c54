use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

/// Privacy budget (epsilon, delta) plus the failure probability p of a halting stage.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrivacyParams {
    pub epsilon: f64,
    pub delta: f64,
    pub p_fail: f64,
}

impl PrivacyParams {
    /// Requires epsilon > 0, delta in (0, 1] and p_fail in [0, 1).
    pub fn new(epsilon: f64, delta: f64, p_fail: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return input(format!("epsilon must be positive and finite, got {epsilon}"));
        }
        if !(delta > 0.0 && delta <= 1.0) {
            return input(format!("delta must lie in (0, 1], got {delta}"));
        }
        if !(0.0..1.0).contains(&p_fail) {
            return input(format!("p_fail must lie in [0, 1), got {p_fail}"));
        }
        Ok(PrivacyParams { epsilon, delta, p_fail })
    }

    /// Scales each component by its factor; factors are expected to be powers of two.
    pub fn split(&self, f_eps: f64, f_delta: f64, f_p: f64) -> PrivacyParams {
        PrivacyParams {
            epsilon: self.epsilon * f_eps,
            delta: self.delta * f_delta,
            p_fail: self.p_fail * f_p,
        }
    }

    /// Regime of the Gaussian-mechanism calibration: epsilon, delta in (0, 1].
    pub fn check_gaussian_regime(&self) -> Result<()> {
        if self.epsilon > 1.0 {
            return input(format!(
                "Gaussian mechanism calibrated for epsilon <= 1, got {}",
                self.epsilon
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(PrivacyParams::new(0.0, 0.1, 0.0).is_err());
        assert!(PrivacyParams::new(1.0, 0.0, 0.0).is_err());
        assert!(PrivacyParams::new(1.0, 1.5, 0.0).is_err());
        assert!(PrivacyParams::new(1.0, 0.1, 1.0).is_err());
        let p = PrivacyParams::new(1.0, 0.1, 0.01).unwrap();
        let q = p.split(0.25, 0.5, 0.5);
        assert_eq!((q.epsilon, q.delta, q.p_fail), (0.25, 0.05, 0.005));
    }
}
