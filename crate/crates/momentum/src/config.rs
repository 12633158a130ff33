use core_oracles::Vector;

use crate::error::MomentumError;

/// Step size, momentum and start. The start doubles as `w₋₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumConfig {
    pub eta: f64,
    pub beta: f64,
    pub w0: Vector,
}

impl MomentumConfig {
    pub fn new(eta: f64, beta: f64, w0: Vector) -> Result<Self, MomentumError> {
        let cfg = MomentumConfig { eta, beta, w0 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), MomentumError> {
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(MomentumError::InvalidConfig(format!("step size must be positive, got {}", self.eta)));
        }
        if !(0.0..1.0).contains(&self.beta) {
            return Err(MomentumError::InvalidConfig(format!("momentum must lie in [0, 1), got {}", self.beta)));
        }
        if self.w0.iter().any(|v| !v.is_finite()) {
            return Err(MomentumError::InvalidConfig("start point has non-finite entries".into()));
        }
        Ok(())
    }
}

/// `Hb1`: `M_t = βM_{t−1} + ∇ℓ(w_t)`, `w_{t+1} = w_t − ηM_t`.
/// `Hb2`: `w_{t+1} = w_t − η∇ℓ(w_t) + β(w_t − w_{t−1})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HbVersion {
    Hb1,
    #[default]
    Hb2,
}
