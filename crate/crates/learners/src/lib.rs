//! Online learners for weighted online convex optimization.
//!
//! Each round a learner receives a weight `α_t` and commits to an action; it
//! then observes the loss `ℓ_t`. Prescient learners (`FTL+`, `FTRL+`,
//! `BestResp+`, `OMD+`) see `ℓ_t` before committing. The decision domain is
//! either a [`FeasibleSet`](core_oracles::FeasibleSet) with linear-type losses
//! or the gradient space of an objective with Fenchel losses
//! `ℓ_t(y) = f*(y) - ⟨x_t, y⟩`, whose minimizers are gradients of `f` at
//! averaged points, so `f*` is never formed.

mod error;
mod loss;
mod solve;
mod state;

pub use error::LearnerError;
pub use loss::{Aggregate, LossDescriptor, Regularizer};
pub use solve::{argmin, gauge_ftrl_plus_solve, SOLVER_MAX_ITERS, SOLVER_TOL};
pub use state::{
    best_resp_step, ftl_step, ftpl_step, ftrl_plus_step, omd_plus_step, optimistic_ftl_step, weighted_regret, Domain,
    LearnerState, Round, Strategy, DEFAULT_FTPL_SAMPLES,
};
