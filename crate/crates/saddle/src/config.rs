use core_oracles::Vector;

use crate::error::SaddleError;

pub const DEFAULT_T_THRED: u64 = 1000;

/// Parameters of momentum SGD with a periodic boosted step.
///
/// Step `t` uses `r` when `t % t_thred == 0` and `eta` otherwise; steps run
/// for `t = 0..=t_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct SaddleConfig {
    pub eta: f64,
    pub r: f64,
    pub beta: f64,
    pub t_thred: u64,
    pub t_max: u64,
    pub seed: u64,
    pub w0: Vector,
    /// Trace keeps every `record_every`-th iterate plus the last one.
    pub record_every: u64,
}

impl SaddleConfig {
    /// `r = 10η`, `t_thred = 1000`, every iterate recorded.
    pub fn new(eta: f64, beta: f64, t_max: u64, seed: u64, w0: Vector) -> Self {
        SaddleConfig { eta, r: 10.0 * eta, beta, t_thred: DEFAULT_T_THRED, t_max, seed, w0, record_every: 1 }
    }

    /// Plain momentum SGD: the boost equals the base step.
    pub fn without_boost(mut self) -> Self {
        self.r = self.eta;
        self
    }

    pub fn with_boost(mut self, r: f64, t_thred: u64) -> Self {
        self.r = r;
        self.t_thred = t_thred;
        self
    }

    pub fn with_record_every(mut self, k: u64) -> Self {
        self.record_every = k;
        self
    }

    pub fn validate(&self) -> Result<(), SaddleError> {
        let bad = |m: String| Err(SaddleError::InvalidConfig(m));
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return bad(format!("eta must be positive and finite, got {}", self.eta));
        }
        if !(self.r.is_finite() && self.r >= self.eta) {
            return bad(format!("boost step r = {} must be finite and at least eta = {}", self.r, self.eta));
        }
        if !(0.0..1.0).contains(&self.beta) {
            return bad(format!("beta must lie in [0, 1), got {}", self.beta));
        }
        if self.t_thred == 0 {
            return bad("t_thred must be positive".into());
        }
        if self.record_every == 0 {
            return bad("record_every must be positive".into());
        }
        if self.w0.iter().any(|v| !v.is_finite()) {
            return bad("w0 has non-finite entries".into());
        }
        Ok(())
    }

    pub fn is_boosted(&self, t: u64) -> bool {
        t.is_multiple_of(self.t_thred)
    }

    pub fn step_size(&self, t: u64) -> f64 {
        if self.is_boosted(t) {
            self.r
        } else {
            self.eta
        }
    }

    /// `⌊t_max / t_thred⌋ + 1`.
    pub fn boosted_steps(&self) -> u64 {
        self.t_max / self.t_thred + 1
    }
}
