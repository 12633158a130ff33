use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SaddleError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("objective has no stochastic gradient oracle")]
    NoStochasticGradient,
    #[error("objective has no Hessian oracle")]
    NoHessian,
    #[error("non-finite iterate at iteration {iteration}")]
    NonFinite { iteration: u64 },
    #[error("shape mismatch: {0}")]
    Shape(String),
}
