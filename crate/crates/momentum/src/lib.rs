//! Gradient descent with Polyak's momentum.
//!
//! [`HeavyBall`] steps either the momentum-buffer form or the two-point
//! difference form. [`ResidualBoundCert`] and [`akv_bound_check`] expose the
//! `(√β)ᵏ C₀` bound on powers of the residual matrix, and the experiment
//! modules train a quadratic, a one-hidden-layer ReLU network, a deep linear
//! network and a cubic-regularized problem.

mod cert;
mod config;
mod cubic;
mod deep_linear;
mod error;
mod hb;
mod quadratic;
mod relu;
mod tuned;

pub use cert::{admissibility_thresholds, akv_bound_check, akv_random_case, AkvCase, block_condition, c0_constant, c0_valid, h, residual_matrix, AkvCheck, ResidualBoundCert};
pub use config::{HbVersion, MomentumConfig};
pub use cubic::{cubic_regularized_experiment, CubicProblem};
pub use deep_linear::{deep_linear_train, DeepLinearData, DeepLinearNet, DeepLinearRun};
pub use error::MomentumError;
pub use hb::{heavy_ball_run, HeavyBall, HeavyBallRun};
pub use quadratic::{iterations_to_residual, quadratic_bound_check, quadratic_instance, BoundCheck, QuadraticInstance};
pub use relu::{relu_gram, relu_train, ReluNet, ReluRun};
pub use tuned::{tuned_params, ProblemKind, TunedParams};
