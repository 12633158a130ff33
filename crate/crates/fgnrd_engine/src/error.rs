use core_oracles::OracleError;
use learners::LearnerError;
use projection_free::ProjectionFreeError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown preset `{name}`; valid presets: {}", valid.join(", "))]
    UnknownPreset { name: String, valid: Vec<String> },
    #[error("inner argmin diverged at round {round} after {iterations} iterations (last step {last_step:e})")]
    Divergent {
        round: usize,
        iterations: usize,
        last_step: f64,
    },
    #[error("round {round}: {source}")]
    Learner { round: usize, source: LearnerError },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    ProjectionFree(#[from] ProjectionFreeError),
}

impl EngineError {
    pub(crate) fn at(round: usize, e: LearnerError) -> Self {
        match e {
            LearnerError::Divergent {
                iterations,
                last_step,
            } => EngineError::Divergent {
                round,
                iterations,
                last_step,
            },
            other => EngineError::Learner {
                round,
                source: other,
            },
        }
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        EngineError::InvalidConfig(msg.into())
    }
}
