use learners::LearnerError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProjectionFreeError {
    #[error("the feasible set must be strongly convex (lambda = {0})")]
    NotStronglyConvex(f64),
    #[error("the feasible set exposes no gauge")]
    NoGauge,
    #[error("step size eta = {eta:e} exceeds the limit 1/(36 L_hat) = {limit:e}")]
    EtaTooLarge { eta: f64, limit: f64 },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("direction must be a unit vector (norm {0})")]
    NotUnit(f64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid parameter `{0}`: {1}")]
    Invalid(&'static str, String),
    #[error(transparent)]
    Learner(#[from] LearnerError),
}
