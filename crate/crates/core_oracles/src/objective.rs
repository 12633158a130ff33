//! Objective oracles.

use nalgebra::Cholesky;

use crate::error::OracleError;
use crate::linalg::{asymmetry, sym_extreme_eigenvalues, Matrix, Vector};
use crate::seed::rng_from;

/// First-order access to a function on R^d together with its declared
/// constants.
///
/// Non-smooth objectives report `f64::INFINITY` from [`smoothness`] and
/// return a subgradient from [`gradient`] (with `sign(0) = 0`).
///
/// [`smoothness`]: ObjectiveOracle::smoothness
/// [`gradient`]: ObjectiveOracle::gradient
pub trait ObjectiveOracle: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, w: &Vector) -> f64;
    fn gradient(&self, w: &Vector) -> Vector;

    /// Unbiased gradient estimate driven entirely by `seed`.
    fn stochastic_gradient(&self, _w: &Vector, _seed: u64) -> Option<Vector> {
        None
    }

    fn smoothness(&self) -> f64;

    fn strong_convexity(&self) -> f64 {
        0.0
    }

    fn hessian_lipschitz(&self) -> Option<f64> {
        None
    }

    fn hessian(&self, _w: &Vector) -> Option<Matrix> {
        None
    }

    /// Closed-form conjugate `f*(y)` when one is known.
    fn conjugate(&self, _y: &Vector) -> Option<f64> {
        None
    }
}

/// Objectives of the form `f = (1/n) sum_i f_i`.
pub trait FiniteSum: ObjectiveOracle {
    fn n_components(&self) -> usize;

    /// Gradient of the i-th summand `f_i` (not divided by n).
    fn component_gradient(&self, i: usize, w: &Vector) -> Vector;
}

/// Uniform component index drawn from a replayable seed.
pub fn sample_index(seed: u64, n: usize) -> usize {
    use rand::Rng;
    rng_from(seed).random_range(0..n)
}

/// `f(w) = ½ wᵀΓw + bᵀw + c`.
#[derive(Debug, Clone)]
pub struct Quadratic {
    gamma: Matrix,
    b: Vector,
    offset: f64,
    lmin: f64,
    lmax: f64,
    chol: Option<Cholesky<f64, nalgebra::Dyn>>,
}

/// Builds `½ wᵀΓw + bᵀw`, rejecting non-square or asymmetric `Γ`.
pub fn make_quadratic(gamma: Matrix, b: Vector) -> Result<Quadratic, OracleError> {
    Quadratic::new(gamma, b, 0.0)
}

impl Quadratic {
    pub fn new(gamma: Matrix, b: Vector, offset: f64) -> Result<Self, OracleError> {
        if gamma.nrows() != gamma.ncols() {
            return Err(OracleError::NotSquare { rows: gamma.nrows(), cols: gamma.ncols() });
        }
        if b.len() != gamma.nrows() {
            return Err(OracleError::DimensionMismatch { expected: gamma.nrows(), got: b.len() });
        }
        let asym = asymmetry(&gamma);
        if asym > 1e-10 {
            return Err(OracleError::NotSymmetric(asym));
        }
        let gamma = (&gamma + gamma.transpose()) * 0.5;
        let (lmin, lmax) = if gamma.nrows() == 0 { (0.0, 0.0) } else { sym_extreme_eigenvalues(&gamma) };
        let chol = if lmin > 0.0 { gamma.clone().cholesky() } else { None };
        Ok(Quadratic { gamma, b, offset, lmin, lmax, chol })
    }

    /// `½ (w - c)ᵀΓ(w - c)`.
    pub fn centered(gamma: Matrix, center: &Vector) -> Result<Self, OracleError> {
        let b = -(&gamma * center);
        let offset = 0.5 * center.dot(&(&gamma * center));
        Quadratic::new(gamma, b, offset)
    }

    pub fn gamma(&self) -> &Matrix {
        &self.gamma
    }

    pub fn linear_term(&self) -> &Vector {
        &self.b
    }

    pub fn lambda_min(&self) -> f64 {
        self.lmin
    }

    pub fn lambda_max(&self) -> f64 {
        self.lmax
    }

    /// Unconstrained minimizer `-Γ⁻¹b` when `Γ` is positive definite.
    pub fn minimizer(&self) -> Option<Vector> {
        self.chol.as_ref().map(|c| -c.solve(&self.b))
    }
}

impl ObjectiveOracle for Quadratic {
    fn dim(&self) -> usize {
        self.b.len()
    }

    fn value(&self, w: &Vector) -> f64 {
        0.5 * w.dot(&(&self.gamma * w)) + self.b.dot(w) + self.offset
    }

    fn gradient(&self, w: &Vector) -> Vector {
        &self.gamma * w + &self.b
    }

    fn smoothness(&self) -> f64 {
        self.lmax.max(0.0)
    }

    fn strong_convexity(&self) -> f64 {
        self.lmin.max(0.0)
    }

    fn hessian_lipschitz(&self) -> Option<f64> {
        Some(0.0)
    }

    fn hessian(&self, _w: &Vector) -> Option<Matrix> {
        Some(self.gamma.clone())
    }

    fn conjugate(&self, y: &Vector) -> Option<f64> {
        let c = self.chol.as_ref()?;
        let r = y - &self.b;
        Some(0.5 * r.dot(&c.solve(&r)) - self.offset)
    }
}

/// `f(w) = ‖w - c‖₂ + κ‖w‖₁`, Lipschitz but non-smooth.
#[derive(Debug, Clone)]
pub struct DistanceObjective {
    pub center: Vector,
    pub l1_weight: f64,
}

impl DistanceObjective {
    pub fn new(center: Vector, l1_weight: f64) -> Self {
        DistanceObjective { center, l1_weight }
    }

    /// Bound on the subgradient norm.
    pub fn lipschitz(&self) -> f64 {
        1.0 + self.l1_weight * (self.center.len() as f64).sqrt()
    }
}

impl ObjectiveOracle for DistanceObjective {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn value(&self, w: &Vector) -> f64 {
        (w - &self.center).norm() + self.l1_weight * w.lp_norm(1)
    }

    fn gradient(&self, w: &Vector) -> Vector {
        let diff = w - &self.center;
        let n = diff.norm();
        let mut g = if n > 0.0 { diff / n } else { Vector::zeros(w.len()) };
        for i in 0..w.len() {
            g[i] += self.l1_weight * sign0(w[i]);
        }
        g
    }

    fn smoothness(&self) -> f64 {
        f64::INFINITY
    }
}

/// `sign` with `sign(0) = 0`.
pub fn sign0(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `f(w) = (1/n) Σ ½ (a_iᵀw - b_i)²` with rows `a_i` of `a`.
#[derive(Debug, Clone)]
pub struct LeastSquaresSum {
    a: Matrix,
    b: Vector,
    lmin: f64,
    lmax: f64,
}

impl LeastSquaresSum {
    pub fn new(a: Matrix, b: Vector) -> Result<Self, OracleError> {
        if a.nrows() != b.len() {
            return Err(OracleError::DimensionMismatch { expected: a.nrows(), got: b.len() });
        }
        if a.nrows() == 0 {
            return Err(OracleError::invalid("a", "at least one sample is required"));
        }
        let h = a.transpose() * &a / a.nrows() as f64;
        let (lmin, lmax) = sym_extreme_eigenvalues(&h);
        Ok(LeastSquaresSum { a, b, lmin, lmax })
    }

    pub fn design(&self) -> &Matrix {
        &self.a
    }

    pub fn targets(&self) -> &Vector {
        &self.b
    }
}

impl ObjectiveOracle for LeastSquaresSum {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn value(&self, w: &Vector) -> f64 {
        let r = &self.a * w - &self.b;
        0.5 * r.norm_squared() / self.a.nrows() as f64
    }

    fn gradient(&self, w: &Vector) -> Vector {
        let r = &self.a * w - &self.b;
        self.a.transpose() * r / self.a.nrows() as f64
    }

    fn stochastic_gradient(&self, w: &Vector, seed: u64) -> Option<Vector> {
        Some(self.component_gradient(sample_index(seed, self.a.nrows()), w))
    }

    fn smoothness(&self) -> f64 {
        self.lmax
    }

    fn strong_convexity(&self) -> f64 {
        self.lmin.max(0.0)
    }

    fn hessian(&self, _w: &Vector) -> Option<Matrix> {
        Some(self.a.transpose() * &self.a / self.a.nrows() as f64)
    }
}

impl FiniteSum for LeastSquaresSum {
    fn n_components(&self) -> usize {
        self.a.nrows()
    }

    fn component_gradient(&self, i: usize, w: &Vector) -> Vector {
        let row = self.a.row(i).transpose();
        let r = row.dot(w) - self.b[i];
        row * r
    }
}
