//! 2-CSPs, degree-2 pseudo-distributions, and correlation rounding.

mod exhaustive;
mod instance;
mod private;
mod pseudo;
mod sdp;
mod solve;

pub use exhaustive::{brute_force_csp, brute_force_max_bisection, brute_force_max_cut};
pub use instance::{read_csp, write_csp, CspInstance};
pub use private::{
    dp_max_2csp, dp_max_bisection, dp_max_cut, nonprivate_max_2csp_pipeline, nonprivate_max_cut_pipeline, DpCspResult, DpCutResult,
    DpSolverConfig, Problem,
};
pub use pseudo::{
    correlation_report, expected_rounded_objective, global_correlation, independent_rounding,
    local_correlation, local_to_global_check, rounding_error_bound, zero_diagonal_blocks, CorrelationReport,
    InvariantReport, LocalToGlobalReport, PseudoDistribution2, SdpStats,
};
pub use sdp::{solve_balanced_sdp, solve_basic_sdp, SdpOptions};
pub use solve::{
    default_balance_slack, drive_down_correlation, label_extend, solve_max_2csp, solve_max_bisection,
    solve_max_cut, CspSolution, CutSolution, DriveResult, SolveDiagnostics, SolverOptions,
};
