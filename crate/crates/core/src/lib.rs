pub mod csp;
pub mod dp;
mod error;
pub mod estimator;
pub mod experiments;
pub mod graph;
pub mod spectral;

pub use error::{Error, Result};
