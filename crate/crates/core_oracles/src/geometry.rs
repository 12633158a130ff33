//! Mirror maps and Bregman divergences.

use serde::{Deserialize, Serialize};

use crate::error::OracleError;
use crate::linalg::Vector;
use crate::sets::FeasibleSet;

/// Distance-generating function `φ` with `V_c(x) = φ(x) - ⟨∇φ(c), x - c⟩ - φ(c)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BregmanGeometry {
    /// `φ = ½‖x‖²`
    Euclidean,
    /// `φ = ½ Σ w_i x_i²` with all `w_i > 0`.
    WeightedEuclidean(Vec<f64>),
    /// `φ = Σ x_i ln x_i` on the positive orthant; 1-strongly convex in l1 on the simplex.
    NegEntropy,
}

impl BregmanGeometry {
    pub fn validate(&self, d: usize) -> Result<(), OracleError> {
        if let BregmanGeometry::WeightedEuclidean(w) = self {
            if w.len() != d {
                return Err(OracleError::DimensionMismatch { expected: d, got: w.len() });
            }
            if w.iter().any(|&wi| !(wi > 0.0)) {
                return Err(OracleError::invalid("weights", "must all be positive"));
            }
        }
        Ok(())
    }

    pub fn phi(&self, x: &Vector) -> f64 {
        match self {
            BregmanGeometry::Euclidean => 0.5 * x.norm_squared(),
            BregmanGeometry::WeightedEuclidean(w) => {
                0.5 * x.iter().zip(w).map(|(xi, wi)| wi * xi * xi).sum::<f64>()
            }
            BregmanGeometry::NegEntropy => x.iter().map(|&xi| if xi > 0.0 { xi * xi.ln() } else { 0.0 }).sum(),
        }
    }

    pub fn grad_phi(&self, x: &Vector) -> Result<Vector, OracleError> {
        match self {
            BregmanGeometry::Euclidean => Ok(x.clone()),
            BregmanGeometry::WeightedEuclidean(w) => {
                Ok(Vector::from_iterator(x.len(), x.iter().zip(w).map(|(xi, wi)| wi * xi)))
            }
            BregmanGeometry::NegEntropy => {
                if let Some(i) = x.iter().position(|&xi| !(xi > 0.0)) {
                    return Err(OracleError::NonDifferentiable(format!(
                        "negative entropy needs positive coordinates, x[{i}] = {}",
                        x[i]
                    )));
                }
                Ok(x.map(|xi| 1.0 + xi.ln()))
            }
        }
    }

    pub fn strong_convexity_beta(&self) -> f64 {
        match self {
            BregmanGeometry::Euclidean | BregmanGeometry::NegEntropy => 1.0,
            BregmanGeometry::WeightedEuclidean(w) => w.iter().cloned().fold(f64::INFINITY, f64::min),
        }
    }

    pub fn divergence(&self, c: &Vector, x: &Vector) -> Result<f64, OracleError> {
        match self {
            BregmanGeometry::NegEntropy => {
                self.grad_phi(c)?;
                Ok(x
                    .iter()
                    .zip(c.iter())
                    .map(|(&xi, &ci)| if xi > 0.0 { xi * (xi / ci).ln() } else { 0.0 } - xi + ci)
                    .sum())
            }
            _ => {
                let g = self.grad_phi(c)?;
                Ok(self.phi(x) - g.dot(&(x - c)) - self.phi(c))
            }
        }
    }

    /// Mirror step `argmin_{x ∈ K} ⟨θ, x⟩ + V_c(x)` for a linear term `θ`.
    ///
    /// Closed forms: Euclidean (projection), weighted Euclidean on R^d, and
    /// negative entropy on the simplex (multiplicative update). Returns
    /// `None` when no closed form is available.
    pub fn mirror_step(&self, c: &Vector, theta: &Vector, set: &dyn FeasibleSet) -> Result<Option<Vector>, OracleError> {
        match self {
            BregmanGeometry::Euclidean => Ok(set.project(&(c - theta))),
            BregmanGeometry::WeightedEuclidean(w) => {
                if set.is_bounded() {
                    return Ok(None);
                }
                Ok(Some(Vector::from_iterator(
                    c.len(),
                    c.iter().zip(theta.iter()).zip(w).map(|((ci, ti), wi)| ci - ti / wi),
                )))
            }
            BregmanGeometry::NegEntropy => {
                self.grad_phi(c)?;
                let shift = theta.iter().cloned().fold(f64::INFINITY, f64::min);
                let un: Vector = Vector::from_iterator(
                    c.len(),
                    c.iter().zip(theta.iter()).map(|(ci, ti)| ci * (-(ti - shift)).exp()),
                );
                let s = un.sum();
                Ok(Some(un / s))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::{Simplex, Unconstrained};
    use nalgebra::dvector;

    #[test]
    fn euclidean_divergence_is_half_sq_distance() {
        let g = BregmanGeometry::Euclidean;
        let v = g.divergence(&dvector![1.0, 0.0], &dvector![0.0, 2.0]).unwrap();
        assert!((v - 2.5).abs() < 1e-15);
    }

    #[test]
    fn entropy_rejects_boundary_center() {
        let g = BregmanGeometry::NegEntropy;
        assert!(matches!(g.grad_phi(&dvector![0.0, 1.0]), Err(OracleError::NonDifferentiable(_))));
    }

    #[test]
    fn entropy_mirror_step_is_multiplicative() {
        let g = BregmanGeometry::NegEntropy;
        let c = dvector![0.5, 0.5];
        let x = g.mirror_step(&c, &dvector![0.0, 1.0], &Simplex::new(2)).unwrap().unwrap();
        let e = (-1.0f64).exp();
        assert!((x[0] - 1.0 / (1.0 + e)).abs() < 1e-15);
    }

    #[test]
    fn weighted_requires_positive_weights() {
        assert!(BregmanGeometry::WeightedEuclidean(vec![1.0, 0.0]).validate(2).is_err());
        let g = BregmanGeometry::WeightedEuclidean(vec![2.0, 4.0]);
        let x = g.mirror_step(&dvector![0.0, 0.0], &dvector![1.0, 1.0], &Unconstrained::new(2)).unwrap().unwrap();
        assert_eq!(x, dvector![-0.5, -0.25]);
    }
}
