//! Problem definitions shared by every other crate in the workspace.
//!
//! An optimization problem is an [`ObjectiveOracle`] together with a
//! [`FeasibleSet`]. Online learners additionally need a [`BregmanGeometry`]
//! and the game loop needs a [`WeightSchedule`]. Runs report through a
//! [`Trace`].

mod error;
pub mod geometry;
pub mod linalg;
pub mod objective;
pub mod prox;
pub mod random;
pub mod seed;
pub mod sets;
pub mod trace;
pub mod weights;

pub use error::OracleError;
pub use geometry::BregmanGeometry;
pub use linalg::{Matrix, Vector};
pub use objective::{
    make_quadratic, DistanceObjective, FiniteSum, LeastSquaresSum, ObjectiveOracle, Quadratic,
};
pub use prox::{prox_l1, Psi};
pub use sets::{gauge_eval, lmo, FeasibleSet, L2Ball, LpBall, NuclearBall, Simplex, Unconstrained};
pub use trace::{Trace, TraceMeta, TraceRow};
pub use weights::WeightSchedule;

/// Absolute tolerance used by `contains` checks throughout the workspace.
pub const FEAS_TOL: f64 = 1e-9;
