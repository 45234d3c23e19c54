//! Privacy primitives: Gaussian, Laplace and log-sensitivity mechanisms and the budget ledger.

mod ledger;
mod mechanisms;
mod params;
mod rng;

pub use ledger::{ledger_compose, BudgetLedger, LedgerEntry, StageStatus};
pub use mechanisms::{gaussian_mechanism, laplace_mechanism, log_sensitivity_mechanism, noise_scale_of};
pub use params::PrivacyParams;
pub use rng::SeededRng;
