use serde::{Deserialize, Serialize};

use crate::dp::PrivacyParams;
use crate::error::{input, Result};

/// Absolute constants of the estimator stages. All must be at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConstants {
    /// Variance multiplier and threshold factor of the gap stage.
    pub gap: f64,
    /// Variance multiplier of the log-coherence stage.
    pub coherence: f64,
    /// Scale multiplier of the projector perturbation.
    pub projector: f64,
    /// Variance multiplier of the low-rank core perturbation.
    pub low_rank: f64,
}

impl Default for EstimatorConstants {
    fn default() -> Self {
        EstimatorConstants { gap: 8.0, coherence: 8.0, projector: 4.0, low_rank: 2.0 }
    }
}

impl EstimatorConstants {
    /// Smallest admissible constants.
    pub fn unit() -> Self {
        EstimatorConstants { gap: 1.0, coherence: 1.0, projector: 1.0, low_rank: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, c) in [
            ("gap", self.gap),
            ("coherence", self.coherence),
            ("projector", self.projector),
            ("low_rank", self.low_rank),
        ] {
            if !(c.is_finite() && c >= 1.0) {
                return input(format!("constant {name} must be >= 1, got {c}"));
            }
        }
        Ok(())
    }
}

/// Parameters of the private low-rank estimator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub rank: usize,
    /// Bound on the adjacency distance between neighbouring inputs.
    pub delta_adj: f64,
    pub params: PrivacyParams,
    pub constants: EstimatorConstants,
}

impl EstimatorConfig {
    pub fn new(rank: usize, delta_adj: f64, params: PrivacyParams) -> Self {
        EstimatorConfig { rank, delta_adj, params, constants: EstimatorConstants::default() }
    }

    pub fn with_constants(mut self, constants: EstimatorConstants) -> Self {
        self.constants = constants;
        self
    }

    /// Checks shared by every stage; `dim` is the matrix dimension.
    pub(crate) fn validate_common(&self, dim: usize) -> Result<()> {
        self.constants.validate()?;
        validate_stage_inputs(self.rank, dim, self.delta_adj, &self.params)
    }

    /// Additionally requires p_fail <= delta / 10.
    pub fn validate(&self, dim: usize) -> Result<()> {
        self.validate_common(dim)?;
        if self.params.p_fail > self.params.delta / 10.0 {
            return input(format!(
                "p_fail must be at most delta/10 ({}), got {}",
                self.params.delta / 10.0,
                self.params.p_fail
            ));
        }
        Ok(())
    }
}

pub(crate) fn validate_stage_inputs(rank: usize, dim: usize, delta_adj: f64, params: &PrivacyParams) -> Result<()> {
    if rank == 0 || rank > dim {
        return Err(crate::Error::Rank { requested: rank, available: dim });
    }
    if !(delta_adj.is_finite() && delta_adj > 0.0) {
        return input(format!("adjacency bound must be positive, got {delta_adj}"));
    }
    if !(params.p_fail > 0.0 && params.p_fail < 0.5) {
        return input(format!("p_fail must lie in (0, 1/2), got {}", params.p_fail));
    }
    if params.delta >= 1.0 {
        return input("delta must be below 1");
    }
    Ok(())
}
