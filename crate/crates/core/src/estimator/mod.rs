//! Private gap, coherence, projector and low-rank estimators.
//!
//! Budget split of the low-rank estimator at (eps, delta, p):
//!
//! | stage                  | eps     | delta     | p   |
//! |------------------------|---------|-----------|-----|
//! | gap                    | eps/8   | delta/8   | p/2 |
//! | log-coherence          | eps/8   | delta/8   | p/2 |
//! | projector-perturbation | eps/4   | delta/4   | 0   |
//! | low-rank-core          | eps/2   | delta/2   | 0   |

mod checks;
mod config;
mod stages;

pub use checks::{
    coherence_gaussian_check, coherence_sensitivity_check, CoherenceGaussianReport, CoherenceSensitivityReport,
    COHERENCE_KAPPA,
};
pub use config::{EstimatorConfig, EstimatorConstants};
pub use stages::{
    private_coherence, private_gap, private_low_rank, private_projector, private_projector_rect,
    PrivateSpectralResult, ProjectorRelease, ReleaseSummary,
};
pub(crate) use stages::{low_rank_from_decomposition, skipped_low_rank_ledger};
