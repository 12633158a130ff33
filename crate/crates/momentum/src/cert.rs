use core_oracles::linalg::sym_extreme_eigenvalues;
use core_oracles::random::{gaussian_vector, spd_with_spectrum};
use core_oracles::{Matrix, Vector};
use rand::Rng;

use crate::error::MomentumError;

/// `h(β, z) = −(β − (1 − √z)²)(β − (1 + √z)²)`.
pub fn h(beta: f64, z: f64) -> f64 {
    let s = z.sqrt();
    -(beta - (1.0 - s).powi(2)) * (beta - (1.0 + s).powi(2))
}

/// `((1 − √(ηλ_min))², (1 − √(ηλ_max))²)`.
pub fn admissibility_thresholds(eta_lambda_min: f64, eta_lambda_max: f64) -> (f64, f64) {
    ((1.0 - eta_lambda_min.sqrt()).powi(2), (1.0 - eta_lambda_max.sqrt()).powi(2))
}

/// `C₀ = √2(β + 1) / √min(h(β, ηλ_min), h(β, ηλ_max))`.
pub fn c0_constant(beta: f64, eta_lambda_min: f64, eta_lambda_max: f64) -> Result<f64, MomentumError> {
    if !(eta_lambda_min >= 0.0 && eta_lambda_max >= eta_lambda_min && eta_lambda_max.is_finite()) {
        return Err(MomentumError::InvalidConfig(format!(
            "need 0 ≤ ηλ_min ≤ ηλ_max finite, got {eta_lambda_min}, {eta_lambda_max}"
        )));
    }
    let (low, high) = admissibility_thresholds(eta_lambda_min, eta_lambda_max);
    if !(beta > low && beta > high && beta <= 1.0) {
        return Err(MomentumError::Inadmissible { beta, low, high });
    }
    let hmin = h(beta, eta_lambda_min).min(h(beta, eta_lambda_max));
    Ok(2f64.sqrt() * (beta + 1.0) / hmin.sqrt())
}

/// `2(β + 1) / √min(h(β, ηλ_min), h(β, ηλ_max))`, a valid bound on the
/// condition number of the eigenbasis of the residual matrix. It is `√2`
/// times [`c0_constant`], which follows from `θ_min ≥ h/(2(β + 1))` for the
/// eigenvalues of `QᵢQᵢ*` (trace `2(β + 1)`, product `h`).
pub fn c0_valid(beta: f64, eta_lambda_min: f64, eta_lambda_max: f64) -> Result<f64, MomentumError> {
    Ok(2f64.sqrt() * c0_constant(beta, eta_lambda_min, eta_lambda_max)?)
}

/// Exact `σ_max(Qᵢ)/σ_min(Qᵢ)` for the 2×2 block at `z = ηλᵢ`:
/// `((β + 1) + √((β + 1)² − h)) / √h`. `sup_k ‖Σᵢᵏ‖/(√β)ᵏ` approaches it.
pub fn block_condition(beta: f64, z: f64) -> f64 {
    let hz = h(beta, z);
    ((beta + 1.0) + ((beta + 1.0).powi(2) - hz).max(0.0).sqrt()) / hz.sqrt()
}

/// Certificate `‖(ξ_t, ξ_{t−1})‖ ≤ θᵗ C₀ ‖(ξ_0, ξ_{−1})‖` with `θ = √β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualBoundCert {
    pub kappa: f64,
    pub beta: f64,
    pub eta: f64,
    pub c0: f64,
    pub theta: f64,
}

impl ResidualBoundCert {
    pub fn new(eta: f64, beta: f64, lambda_min: f64, lambda_max: f64) -> Result<Self, MomentumError> {
        let c0 = c0_constant(beta, eta * lambda_min, eta * lambda_max)?;
        Ok(ResidualBoundCert { kappa: lambda_max / lambda_min, beta, eta, c0, theta: beta.sqrt() })
    }

    pub fn bound(&self, t: usize, initial: f64) -> f64 {
        self.theta.powi(t as i32) * self.c0 * initial
    }
}

/// `[[(1 + β)I − ηH, −βI], [I, 0]]`.
pub fn residual_matrix(hm: &Matrix, eta: f64, beta: f64) -> Matrix {
    let n = hm.nrows();
    let mut a = Matrix::zeros(2 * n, 2 * n);
    let top_left = Matrix::identity(n, n) * (1.0 + beta) - hm * eta;
    a.view_mut((0, 0), (n, n)).copy_from(&top_left);
    a.view_mut((0, n), (n, n)).copy_from(&(Matrix::identity(n, n) * -beta));
    a.view_mut((n, 0), (n, n)).copy_from(&Matrix::identity(n, n));
    a
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AkvCheck {
    pub holds: bool,
    /// `max_k ‖Aᵏv₀‖ / ((√β)ᵏ C₀ ‖v₀‖)`.
    pub max_ratio: f64,
    pub worst_k: usize,
    pub c0: f64,
    /// Same ratio against [`c0_valid`].
    pub max_ratio_valid: f64,
    pub holds_valid: bool,
}

/// Relative slack for rounding in the repeated products.
const RATIO_SLACK: f64 = 1e-9;

/// Forms `A` explicitly and checks `‖Aᵏv₀‖ ≤ (√β)ᵏ C₀ ‖v₀‖` for `k = 0..=K`
/// by repeated multiplication. `v₀` has length `2n`.
pub fn akv_bound_check(hm: &Matrix, v0: &Vector, eta: f64, beta: f64, k_max: usize) -> Result<AkvCheck, MomentumError> {
    let n = hm.nrows();
    if hm.ncols() != n || v0.len() != 2 * n {
        return Err(MomentumError::Shape(format!("H is {}×{}, v₀ has length {}", n, hm.ncols(), v0.len())));
    }
    let (lmin, lmax) = sym_extreme_eigenvalues(hm);
    if lmin < -1e-12 * lmax.abs().max(1.0) {
        return Err(MomentumError::InvalidConfig(format!("H is not PSD (λ_min = {lmin})")));
    }
    let c0 = c0_constant(beta, eta * lmin.max(0.0), eta * lmax)?;
    let a = residual_matrix(hm, eta, beta);
    let base = v0.norm();
    let mut v = v0.clone();
    let (mut max_ratio, mut worst_k) = (0.0f64, 0);
    for k in 0..=k_max {
        if k > 0 {
            v = &a * &v;
        }
        let bound = beta.sqrt().powi(k as i32) * c0 * base;
        let ratio = if bound > 0.0 { v.norm() / bound } else { 0.0 };
        if ratio > max_ratio {
            max_ratio = ratio;
            worst_k = k;
        }
    }
    let max_ratio_valid = max_ratio / 2f64.sqrt();
    Ok(AkvCheck {
        holds: max_ratio <= 1.0 + RATIO_SLACK,
        max_ratio,
        worst_k,
        c0,
        max_ratio_valid,
        holds_valid: max_ratio_valid <= 1.0 + RATIO_SLACK,
    })
}

/// A random instance for [`akv_bound_check`].
#[derive(Debug, Clone)]
pub struct AkvCase {
    pub h: Matrix,
    pub v0: Vector,
    pub eta: f64,
    pub beta: f64,
}

/// `d ∈ 1..=8`, spectrum in `[λ_min, λ_min·U(1, 50)]` with
/// `λ_min ~ U(0.05, 1)`, `η = U(0.1, 1)/λ_max` and β uniform over the
/// admissible range (clipped 1% from either end).
pub fn akv_random_case<R: Rng>(rng: &mut R) -> AkvCase {
    let n = rng.random_range(1..=8);
    let lmin = rng.random_range(0.05..1.0);
    let lmax = lmin * rng.random_range(1.0..50.0);
    let h = spd_with_spectrum(rng, n, lmin, lmax);
    let eta = rng.random_range(0.1..1.0) / lmax;
    let (low, high) = admissibility_thresholds(eta * lmin, eta * lmax);
    let floor = low.max(high);
    let beta = floor + (1.0 - floor) * rng.random_range(0.01..0.99);
    let v0 = gaussian_vector(rng, 2 * n);
    AkvCase { h, v0, eta, beta }
}
