//! Round weights `α_t` and their partial sums `A_t`.

use serde::{Deserialize, Serialize};

use crate::error::OracleError;

/// Largest adaptive weight; used once the gradient falls below [`ADAPTIVE_FLOOR`].
pub const ADAPTIVE_CAP: f64 = 1e12;
pub const ADAPTIVE_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum WeightSchedule {
    /// `α_t = 1`
    Uniform,
    /// `α_t = t`
    Linear,
    /// `α_1` given, then `α_t = θ/(1-θ)·A_{t-1}` so that `α_t / A_t = θ`.
    Exponential { theta: f64, alpha1: f64 },
    /// `α_t = 1/‖∇ℓ_t‖²`, resolved by the game loop at run time.
    AdaptiveInverseGradSq,
    /// Explicit sequence, `α_t = seq[t-1]`.
    Custom(Vec<f64>),
}

impl WeightSchedule {
    pub fn validate(&self) -> Result<(), OracleError> {
        match self {
            WeightSchedule::Exponential { theta, alpha1 } => {
                if !(*theta > 0.0 && *theta < 1.0) {
                    return Err(OracleError::invalid("theta", "must lie in (0, 1)"));
                }
                if !(*alpha1 > 0.0) {
                    return Err(OracleError::invalid("alpha1", "must be positive"));
                }
            }
            WeightSchedule::Custom(seq) => {
                if let Some(i) = seq.iter().position(|a| !(*a > 0.0 && a.is_finite())) {
                    return Err(OracleError::invalid("weights", format!("entry {i} is not a positive finite number")));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(self, WeightSchedule::AdaptiveInverseGradSq)
    }

    /// `α_t` for `t ≥ 1`. `None` for adaptive schedules and for custom
    /// sequences shorter than `t`.
    pub fn alpha(&self, t: usize) -> Option<f64> {
        assert!(t >= 1, "rounds are numbered from 1");
        match self {
            WeightSchedule::Uniform => Some(1.0),
            WeightSchedule::Linear => Some(t as f64),
            WeightSchedule::Exponential { theta, alpha1 } => {
                if t == 1 {
                    Some(*alpha1)
                } else {
                    Some(theta * alpha1 / (1.0 - theta).powi(t as i32 - 1))
                }
            }
            WeightSchedule::AdaptiveInverseGradSq => None,
            WeightSchedule::Custom(seq) => seq.get(t - 1).cloned(),
        }
    }

    /// `A_t = Σ_{s ≤ t} α_s`, with `A_0 = 0`.
    pub fn cum_a(&self, t: usize) -> Option<f64> {
        if t == 0 {
            return Some(0.0);
        }
        match self {
            WeightSchedule::Uniform => Some(t as f64),
            WeightSchedule::Linear => Some((t * (t + 1)) as f64 / 2.0),
            WeightSchedule::Exponential { theta, alpha1 } => Some(alpha1 / (1.0 - theta).powi(t as i32 - 1)),
            WeightSchedule::AdaptiveInverseGradSq => None,
            WeightSchedule::Custom(seq) => {
                if seq.len() < t {
                    None
                } else {
                    Some(seq[..t].iter().sum())
                }
            }
        }
    }
}

/// Adaptive weight `1/g²`, capped when `g` is below the floor.
pub fn adaptive_alpha(grad_norm: f64) -> f64 {
    if grad_norm < ADAPTIVE_FLOOR {
        ADAPTIVE_CAP
    } else {
        (1.0 / (grad_norm * grad_norm)).min(ADAPTIVE_CAP)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_and_uniform() {
        assert_eq!(WeightSchedule::Linear.alpha(7), Some(7.0));
        assert_eq!(WeightSchedule::Linear.cum_a(4), Some(10.0));
        assert_eq!(WeightSchedule::Uniform.cum_a(9), Some(9.0));
    }

    #[test]
    fn exponential_ratio() {
        let w = WeightSchedule::Exponential { theta: 0.1, alpha1: 0.5 };
        for t in 2..50 {
            let r = w.alpha(t).unwrap() / w.cum_a(t).unwrap();
            assert!((r - 0.1).abs() < 1e-12);
        }
    }

    #[test]
    fn adaptive_cap() {
        assert_eq!(adaptive_alpha(1e-7), ADAPTIVE_CAP);
        assert_eq!(adaptive_alpha(0.5), 4.0);
        assert!(WeightSchedule::AdaptiveInverseGradSq.alpha(3).is_none());
    }

    #[test]
    fn custom_validation() {
        assert!(WeightSchedule::Custom(vec![1.0, -1.0]).validate().is_err());
        assert_eq!(WeightSchedule::Custom(vec![1.0, 2.0]).alpha(3), None);
    }
}
