use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MomentumError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("momentum β = {beta} is not admissible: need β > max((1−√(ηλ_min))², (1−√(ηλ_max))²) = max({low}, {high}) and β ≤ 1")]
    Inadmissible { beta: f64, low: f64, high: f64 },
    #[error("condition number {0} is below 1")]
    KappaBelowOne(f64),
    #[error("non-finite iterate at iteration {iteration}")]
    NonFinite { iteration: usize },
    #[error("width m = {m} is below max(d, d_y) = {required}")]
    WidthTooSmall { m: usize, required: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
}
