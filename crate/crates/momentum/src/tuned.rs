use core_oracles::Vector;

use crate::config::MomentumConfig;
use crate::error::MomentumError;

/// Spectral constants each parameter rule needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProblemKind {
    /// Hessian spectrum `[λ_min, λ_max]`.
    Quadratic { lambda_min: f64, lambda_max: f64 },
    /// Spectrum of the initial Gram matrix `H₀`.
    Relu { lambda_min: f64, lambda_max: f64 },
    /// Output dimension, depth and the extreme squared singular values of `X`.
    DeepLinear { d_y: usize, depth: usize, sigma2_max: f64, sigma2_min: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunedParams {
    pub eta: f64,
    pub beta: f64,
    pub kappa: f64,
}

impl TunedParams {
    pub fn config(&self, w0: Vector) -> Result<MomentumConfig, MomentumError> {
        MomentumConfig::new(self.eta, self.beta, w0)
    }
}

fn beta_for(kappa: f64) -> Result<f64, MomentumError> {
    if !(kappa >= 1.0) {
        return Err(MomentumError::KappaBelowOne(kappa));
    }
    Ok((1.0 - 1.0 / (2.0 * kappa.sqrt())).powi(2))
}

fn positive(name: &str, v: f64) -> Result<(), MomentumError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(MomentumError::InvalidConfig(format!("{name} must be positive, got {v}")))
    }
}

/// `η = 1/λ_max`, `β = (1 − 1/(2√κ))²` for the quadratic and ReLU cases;
/// `η = d_y/(Lσ²_max)` with `κ = σ²_max/σ²_min` for the deep linear network.
pub fn tuned_params(kind: ProblemKind) -> Result<TunedParams, MomentumError> {
    match kind {
        ProblemKind::Quadratic { lambda_min, lambda_max } | ProblemKind::Relu { lambda_min, lambda_max } => {
            positive("λ_min", lambda_min)?;
            positive("λ_max", lambda_max)?;
            let kappa = lambda_max / lambda_min;
            Ok(TunedParams { eta: 1.0 / lambda_max, beta: beta_for(kappa)?, kappa })
        }
        ProblemKind::DeepLinear { d_y, depth, sigma2_max, sigma2_min } => {
            if d_y == 0 || depth == 0 {
                return Err(MomentumError::InvalidConfig("d_y and depth must be positive".into()));
            }
            positive("σ²_max", sigma2_max)?;
            positive("σ²_min", sigma2_min)?;
            let kappa = sigma2_max / sigma2_min;
            Ok(TunedParams { eta: d_y as f64 / (depth as f64 * sigma2_max), beta: beta_for(kappa)?, kappa })
        }
    }
}
