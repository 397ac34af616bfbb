//! Minimization of gate error over conservation-respecting unitaries, and a
//! randomized search for violations of the Heisenberg-type relation.

pub mod commutant;
pub mod descent;
mod gate;
mod search;

pub use commutant::{
    commutant_algebra, commutant_basis, CommutantAlgebra, CommutantBlock, CommutantParametrization,
    FeasibleSet,
};
pub use descent::{central_gradient, DescentOutcome, DescentSettings};
pub use gate::{
    minimize_gate_error, minimize_gate_error_for_input, GateObjective, OptimizationResult,
    OptimizerConfig, BOUND_CHECK_TOL,
};
pub use search::{
    joint_input, screen_case, violation_search, Exhibit, ModelFamily, VIOLATION_MARGIN,
};
