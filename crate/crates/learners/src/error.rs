use core_oracles::OracleError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LearnerError {
    #[error("linear losses over an unbounded set have no minimizer")]
    Unbounded,
    #[error("{0} needs the current round's loss")]
    NeedsCurrentLoss(&'static str),
    #[error("empty history and no hint")]
    NeedsHint,
    #[error("step parameter `{0}` must be positive, got {1}")]
    NonPositiveStep(&'static str, f64),
    #[error("inner argmin did not converge within {iterations} iterations (last step {last_step:e})")]
    Divergent { iterations: usize, last_step: f64 },
    #[error("loss kind does not match the learner's domain: {0}")]
    IncompatibleLoss(&'static str),
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
