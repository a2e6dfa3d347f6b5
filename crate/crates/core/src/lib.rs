//! Robust Matroid Center: choose centers forming an independent set of a
//! matroid so that the balls of a common radius around them cover at least a
//! given weight, and minimize that radius.
//!
//! The solver runs a greedy selection over a Rado matroid that lets every
//! picked point be represented by an independent center within twice the
//! radius guess, and searches over the candidate radii for a 5-approximation.
//! [`exact`] contains brute-force references for checking it on small inputs.

pub mod exact;
pub mod intersection;
pub mod matroid;
pub mod metric;
pub mod rado;
pub mod solver;

pub use intersection::{max_common_independent, IntersectionError, IntersectionState};
pub use matroid::{
    AnyMatroid, CountingOracle, ExplicitMatroid, GraphicMatroid, Matroid, MatroidError,
    PartitionMatroid, TransversalMatroid, UniformMatroid,
};
pub use metric::{MetricError, MetricInstance, MetricViolation, RadiusList};
pub use rado::{RadoError, RadoExtender, RadoSystem, RepresentativeMap};
pub use solver::{
    greedy_fixed_radius, search_radius, verify_solution, GreedyRun, GreedyStep, RadiusSearch,
    SearchOutcome, Solution, SolveError, VerificationReport,
};
