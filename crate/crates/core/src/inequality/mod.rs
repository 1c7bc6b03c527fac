//! Stein-type inequalities evaluated as `lhs / rhs` ratio reports.

mod jensen;
mod report;
mod semicommutative;
mod stein;

pub use jensen::{
    find_jensen_violation, find_monotonicity_violation, jensen_gap, monotonicity_gap, GapReport,
    MonotonicityWitness, ViolationSearch,
};
pub use report::{HardAssertion, InequalityId, RatioReport, ReportParams};
pub use semicommutative::{check_semicommutative, ClassicalFiltration, Probability, StochasticProcess};
pub use stein::{
    check_adapted_s12, check_crp_stein, check_doob_maximal, check_dual_doob, check_projections,
    check_sp_inf, check_sp_inf_with, check_stein_isometry, check_stein_pq, check_stein_qq,
    check_doob_maximal_with,
};
