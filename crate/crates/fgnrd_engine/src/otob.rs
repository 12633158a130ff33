use core_oracles::Vector;
use learners::{LearnerState, LossDescriptor};

use crate::error::EngineError;

/// Plays `learner` against `losses` with unit weights and returns the
/// uniform average of its actions.
pub fn online_to_batch(
    learner: &mut LearnerState,
    losses: &[LossDescriptor],
) -> Result<Vector, EngineError> {
    if losses.is_empty() {
        return Err(EngineError::config(
            "online-to-batch needs at least one sample loss",
        ));
    }
    let mut sum: Option<Vector> = None;
    for (i, loss) in losses.iter().enumerate() {
        let t = i + 1;
        let current = if learner.strategy().is_prescient() {
            Some(loss)
        } else {
            None
        };
        let z = learner
            .act(1.0, current, None)
            .map_err(|e| EngineError::at(t, e))?;
        learner
            .observe(1.0, loss.clone())
            .map_err(|e| EngineError::at(t, e))?;
        sum = Some(match sum {
            Some(s) => s + z,
            None => z,
        });
    }
    Ok(sum.expect("non-empty") / losses.len() as f64)
}
