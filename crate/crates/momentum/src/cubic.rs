use core_oracles::random::gaussian_vector;
use core_oracles::seed::{derive_seed, rng_from};
use core_oracles::{Matrix, ObjectiveOracle, Vector};
use rand::Rng;

use crate::config::{HbVersion, MomentumConfig};
use crate::error::MomentumError;
use crate::hb::{heavy_ball_run, HeavyBallRun};

/// `½wᵀAw + bᵀw + (ρ/3)‖w‖³` with symmetric, possibly indefinite `A`.
#[derive(Debug, Clone)]
pub struct CubicProblem {
    pub a: Matrix,
    pub b: Vector,
    pub rho: f64,
    /// Known global minimizer, when constructed from one.
    pub w_star: Option<Vector>,
}

impl CubicProblem {
    pub fn new(a: Matrix, b: Vector, rho: f64) -> Result<Self, MomentumError> {
        if !a.is_square() || a.nrows() != b.len() {
            return Err(MomentumError::Shape(format!("A is {}×{}, b has length {}", a.nrows(), a.ncols(), b.len())));
        }
        if (&a - a.transpose()).amax() > 1e-12 * a.amax().max(1.0) {
            return Err(MomentumError::InvalidConfig("A must be symmetric".into()));
        }
        if !(rho >= 0.0 && rho.is_finite()) {
            return Err(MomentumError::InvalidConfig(format!("ρ must be nonnegative, got {rho}")));
        }
        Ok(CubicProblem { a, b, rho, w_star: None })
    }

    /// `b = −(A + ρ‖w*‖I)w*`, which makes `w*` stationary; it is the global
    /// minimizer when `A + ρ‖w*‖I ⪰ 0`.
    pub fn with_minimizer(a: Matrix, rho: f64, w_star: Vector) -> Result<Self, MomentumError> {
        let n = w_star.norm();
        let b = -(&a + Matrix::identity(a.nrows(), a.ncols()) * (rho * n)) * &w_star;
        let mut p = CubicProblem::new(a, b, rho)?;
        p.w_star = Some(w_star);
        Ok(p)
    }

    /// `d = 4`, `ρ = ‖w*‖ = 1`, `A = diag(−0.2, −0.195, a₃₃, a₄₄)` with
    /// `a₃₃, a₄₄ ∼ U[−0.195, 1]`, and `w* ∝ (A + I)^{−ξ}θ`, `θ ∼ N(0, I)`,
    /// `log₂ ξ ∼ U[−1, 1]`.
    pub fn reference_instance(seed: u64) -> Self {
        let (lmin, gap, norm_a, rho, norm_w) = (-0.2, 5e-3, 1.0, 1.0, 1.0);
        let mut rng = rng_from(derive_seed(seed, "cubic_instance", 0));
        let diag = Vector::from_vec(vec![
            lmin,
            lmin + gap,
            rng.random_range(lmin + gap..norm_a),
            rng.random_range(lmin + gap..norm_a),
        ]);
        let theta = gaussian_vector(&mut rng, 4);
        let xi = 2f64.powf(rng.random_range(-1.0..1.0));
        let tilde = Vector::from_iterator(4, (0..4).map(|i| (diag[i] + rho * norm_w).powf(-xi) * theta[i]));
        let w_star = &tilde * (norm_w / tilde.norm());
        CubicProblem::with_minimizer(Matrix::from_diagonal(&diag), rho, w_star).expect("diagonal is symmetric")
    }

    pub fn min_value(&self) -> Option<f64> {
        self.w_star.as_ref().map(|w| self.value(w))
    }
}

impl ObjectiveOracle for CubicProblem {
    fn dim(&self) -> usize {
        self.b.len()
    }

    fn value(&self, w: &Vector) -> f64 {
        0.5 * w.dot(&(&self.a * w)) + self.b.dot(w) + self.rho / 3.0 * w.norm().powi(3)
    }

    fn gradient(&self, w: &Vector) -> Vector {
        &self.a * w + &self.b + w * (self.rho * w.norm())
    }

    /// The cubic term has no global Lipschitz gradient.
    fn smoothness(&self) -> f64 {
        f64::INFINITY
    }

    fn hessian_lipschitz(&self) -> Option<f64> {
        Some(2.0 * self.rho)
    }

    fn hessian(&self, w: &Vector) -> Option<Matrix> {
        let n = w.norm();
        let mut hm = &self.a + Matrix::identity(w.len(), w.len()) * (self.rho * n);
        if n > 0.0 {
            hm += w * w.transpose() * (self.rho / n);
        }
        Some(hm)
    }
}

/// Heavy ball on the cubic problem; `gap` holds `f(w_t) − f(w*)` when the
/// minimizer is known.
pub fn cubic_regularized_experiment(problem: &CubicProblem, cfg: &MomentumConfig, t_max: usize) -> Result<HeavyBallRun, MomentumError> {
    let mut run = heavy_ball_run(cfg, problem, t_max, problem.w_star.as_ref(), HbVersion::Hb2)?;
    if let Some(fstar) = problem.min_value() {
        for row in &mut run.trace.rows {
            row.gap = Some(row.f_value - fstar);
        }
    }
    Ok(run)
}
