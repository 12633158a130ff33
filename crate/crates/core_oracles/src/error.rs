use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (max |G - G^T| = {0:e})")]
    NotSymmetric(f64),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("`{0}` is not available for this set")]
    Unsupported(&'static str),
    #[error("mirror map is not differentiable at the given point: {0}")]
    NonDifferentiable(String),
}

impl OracleError {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        OracleError::InvalidParameter { name, reason: reason.into() }
    }
}
