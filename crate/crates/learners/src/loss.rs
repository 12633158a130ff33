use core_oracles::{FeasibleSet, Matrix, ObjectiveOracle, Psi, Vector};
use serde::{Deserialize, Serialize};

use crate::error::LearnerError;

/// One round's loss.
#[derive(Debug, Clone, PartialEq)]
pub enum LossDescriptor {
    /// `⟨θ, z⟩`
    Linear(Vector),
    /// `½ zᵀQz + ⟨θ, z⟩`
    Quadratic { q: Matrix, theta: Vector },
    /// `⟨θ, z⟩ + ψ(z)`
    Composite { theta: Vector, psi: Psi },
    /// `f*(y) - ⟨x, y⟩` on the gradient space of `f`.
    FenchelY { x: Vector },
}

impl LossDescriptor {
    pub fn is_fenchel(&self) -> bool {
        matches!(self, LossDescriptor::FenchelY { .. })
    }

    pub fn dim(&self) -> usize {
        match self {
            LossDescriptor::Linear(t) => t.len(),
            LossDescriptor::Quadratic { theta, .. } | LossDescriptor::Composite { theta, .. } => theta.len(),
            LossDescriptor::FenchelY { x } => x.len(),
        }
    }

    /// Value at `z` for set-domain losses.
    pub fn value(&self, z: &Vector) -> Option<f64> {
        match self {
            LossDescriptor::Linear(t) => Some(t.dot(z)),
            LossDescriptor::Quadratic { q, theta } => Some(0.5 * z.dot(&(q * z)) + theta.dot(z)),
            LossDescriptor::Composite { theta, psi } => Some(theta.dot(z) + psi.value(z)),
            LossDescriptor::FenchelY { .. } => None,
        }
    }

    /// Value of a Fenchel loss at `y = ∇f(u)` using `f*(∇f(u)) = ⟨u, ∇f(u)⟩ - f(u)`.
    pub fn fenchel_value_at_anchor(&self, f: &dyn ObjectiveOracle, y: &Vector, u: &Vector) -> Option<f64> {
        match self {
            LossDescriptor::FenchelY { x } => Some(u.dot(y) - f.value(u) - x.dot(y)),
            _ => None,
        }
    }

    /// Gradient at `z` for smooth set-domain losses.
    pub fn gradient(&self, z: &Vector) -> Option<Vector> {
        match self {
            LossDescriptor::Linear(t) => Some(t.clone()),
            LossDescriptor::Quadratic { q, theta } => Some(q * z + theta),
            LossDescriptor::Composite { theta, psi: Psi::HalfSq(mu) } => Some(theta + z * *mu),
            LossDescriptor::Composite { theta, psi: Psi::Zero } => Some(theta.clone()),
            _ => None,
        }
    }
}

/// Regularizer `R` used by the FTRL family (scaled by `1/η` at use).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Regularizer {
    Zero,
    /// `½‖z‖²`
    HalfSqNorm,
    /// `½‖z - c‖²`
    HalfSqDist(Vec<f64>),
    /// Squared gauge `γ_K(z)²` of the decision set.
    SqGauge,
}

impl Regularizer {
    pub fn value(&self, z: &Vector, set: &dyn FeasibleSet) -> Result<f64, LearnerError> {
        Ok(match self {
            Regularizer::Zero => 0.0,
            Regularizer::HalfSqNorm => 0.5 * z.norm_squared(),
            Regularizer::HalfSqDist(c) => 0.5 * (z - Vector::from_column_slice(c)).norm_squared(),
            Regularizer::SqGauge => {
                let g = set.gauge(z).ok_or(LearnerError::Unsupported("squared gauge on a set without a gauge".into()))?;
                g * g
            }
        })
    }

    /// `argmin_{z ∈ K} R(z)`.
    pub fn minimizer(&self, set: &dyn FeasibleSet) -> Result<Vector, LearnerError> {
        let d = set.dim();
        match self {
            Regularizer::Zero => Err(LearnerError::Unsupported("zero regularizer has no unique minimizer".into())),
            Regularizer::HalfSqNorm => set
                .project(&Vector::zeros(d))
                .ok_or(LearnerError::Unsupported("projection needed for argmin R".into())),
            Regularizer::HalfSqDist(c) => set
                .project(&Vector::from_column_slice(c))
                .ok_or(LearnerError::Unsupported("projection needed for argmin R".into())),
            Regularizer::SqGauge => Ok(Vector::zeros(d)),
        }
    }

    /// Strong convexity of `R` on the set.
    pub fn strong_convexity(&self, set: &dyn FeasibleSet) -> f64 {
        match self {
            Regularizer::Zero => 0.0,
            Regularizer::HalfSqNorm | Regularizer::HalfSqDist(_) => 1.0,
            Regularizer::SqGauge => set.gauge_sq_strong_convexity().unwrap_or(0.0),
        }
    }
}

/// A weighted sum of set-domain losses and Euclidean regularizers:
/// `½ zᵀQz + (iso/2)‖z‖² + ⟨θ, z⟩ + l1‖z‖₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub theta: Vector,
    pub quad: Option<Matrix>,
    pub iso: f64,
    pub l1: f64,
}

impl Aggregate {
    pub fn zeros(d: usize) -> Self {
        Aggregate { theta: Vector::zeros(d), quad: None, iso: 0.0, l1: 0.0 }
    }

    pub fn is_linear(&self) -> bool {
        self.quad.is_none() && self.iso == 0.0 && self.l1 == 0.0
    }

    pub fn add_loss(&mut self, alpha: f64, loss: &LossDescriptor) -> Result<(), LearnerError> {
        if loss.dim() != self.theta.len() {
            return Err(LearnerError::IncompatibleLoss("dimension mismatch"));
        }
        match loss {
            LossDescriptor::Linear(t) => self.theta.axpy(alpha, t, 1.0),
            LossDescriptor::Quadratic { q, theta } => {
                self.theta.axpy(alpha, theta, 1.0);
                match &mut self.quad {
                    Some(acc) => *acc += q * alpha,
                    None => self.quad = Some(q * alpha),
                }
            }
            LossDescriptor::Composite { theta, psi } => {
                self.theta.axpy(alpha, theta, 1.0);
                match *psi {
                    Psi::Zero => {}
                    Psi::L1(c) => self.l1 += alpha * c,
                    Psi::HalfSq(mu) => self.iso += alpha * mu,
                }
            }
            LossDescriptor::FenchelY { .. } => {
                return Err(LearnerError::IncompatibleLoss("Fenchel losses live on the gradient space"))
            }
        }
        Ok(())
    }

    /// Adds `R/η` for Euclidean regularizers. The squared gauge is handled by
    /// [`crate::gauge_ftrl_plus_solve`] and is rejected here.
    pub fn add_regularizer(&mut self, reg: &Regularizer, eta: f64) -> Result<(), LearnerError> {
        match reg {
            Regularizer::Zero => {}
            Regularizer::HalfSqNorm => self.iso += 1.0 / eta,
            Regularizer::HalfSqDist(c) => {
                self.iso += 1.0 / eta;
                self.theta.axpy(-1.0 / eta, &Vector::from_column_slice(c), 1.0);
            }
            Regularizer::SqGauge => {
                return Err(LearnerError::Unsupported("squared gauge inside a general aggregate".into()))
            }
        }
        Ok(())
    }

    pub fn value(&self, z: &Vector) -> f64 {
        let mut v = self.theta.dot(z) + 0.5 * self.iso * z.norm_squared() + self.l1 * z.lp_norm(1);
        if let Some(q) = &self.quad {
            v += 0.5 * z.dot(&(q * z));
        }
        v
    }

    /// Gradient of the smooth part.
    pub fn smooth_gradient(&self, z: &Vector) -> Vector {
        let mut g = &self.theta + z * self.iso;
        if let Some(q) = &self.quad {
            g += q * z;
        }
        g
    }
}
