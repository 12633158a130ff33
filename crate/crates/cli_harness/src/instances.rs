//! Problem instances shared by the criteria and the experiments.

use std::sync::Arc;

use core_oracles::linalg::nuclear_norm;
use core_oracles::random::{gaussian_vector, spd_with_spectrum};
use core_oracles::seed::rng_from;
use core_oracles::{FeasibleSet, L2Ball, Matrix, ObjectiveOracle, Quadratic, Unconstrained, Vector};
use learners::LossDescriptor;
use nalgebra::dvector;
use projection_free::MatrixCompletion;
use rand::Rng;

/// `½‖w − (2, 0)‖²` over the unit ℓ₂ ball; `f* = 0.5`.
pub fn fw_ball_problem() -> (Quadratic, L2Ball) {
    (Quadratic::centered(Matrix::identity(2, 2), &dvector![2.0, 0.0]).expect("valid quadratic"), L2Ball::unit(2))
}

/// Equivalence instances: seeded quadratics with spectrum in `[0.1, 2]`
/// and a start point projected onto the set.
pub fn equivalence_instance(seed: u64, d: usize, constrained: bool) -> (Quadratic, Arc<dyn FeasibleSet>, Vector) {
    let mut rng = rng_from(1000 + seed);
    let (q, _) = core_oracles::random::random_quadratic(&mut rng, d, 0.1, 2.0, 2.0);
    let set: Arc<dyn FeasibleSet> = if constrained { Arc::new(L2Ball::unit(d)) } else { Arc::new(Unconstrained::new(d)) };
    let x0 = set.project(&(gaussian_vector(&mut rng, d) * 0.5)).expect("projection exists");
    (q, set, x0)
}

/// Quadratic with spectrum `[1, κ]` and a Gaussian minimizer.
pub fn conditioned_quadratic(seed: u64, d: usize, kappa: f64) -> (Quadratic, Vector) {
    let mut rng = rng_from(seed);
    let c = gaussian_vector(&mut rng, d);
    let q = Quadratic::centered(spd_with_spectrum(&mut rng, d, 1.0, kappa), &c).expect("valid quadratic");
    (q, c)
}

/// Minimizer of `½(x − c)ᵀΓ(x − c)` over the unit ball: the KKT multiplier
/// `x(ν) = (Γ + νI)⁻¹Γc` bisected on `‖x(ν)‖ = 1`.
pub fn ball_quadratic_min(gamma: &Matrix, c: &Vector) -> Vector {
    let solve = |nu: f64| -> Vector {
        let m = gamma + Matrix::identity(c.len(), c.len()) * nu;
        m.cholesky().expect("positive definite").solve(&(gamma * c))
    };
    if c.norm() <= 1.0 {
        return c.clone();
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while solve(hi).norm() > 1.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if solve(mid).norm() > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    solve(hi)
}

/// Minimum of `f(θ)` over the circle: dense grid then golden section.
pub fn circle_min(f: &dyn Fn(f64) -> f64) -> f64 {
    let n = 20_000;
    let h = std::f64::consts::TAU / n as f64;
    let k = (0..n).min_by(|&a, &b| f(a as f64 * h).total_cmp(&f(b as f64 * h))).expect("grid is non-empty");
    let (mut lo, mut hi) = ((k as f64 - 1.0) * h, (k as f64 + 1.0) * h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let a = hi - g * (hi - lo);
        let b = lo + g * (hi - lo);
        if f(a) < f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    f(0.5 * (lo + hi))
}

/// Gauge FW instance: `½(x − c)ᵀdiag(1, 0.3)(x − c)`, `c = (2, 1)`, with its
/// constrained minimizer.
pub fn gauge_instance() -> (Quadratic, L2Ball, Vector) {
    let gamma = Matrix::from_diagonal(&dvector![1.0, 0.3]);
    let c = dvector![2.0, 1.0];
    let xstar = ball_quadratic_min(&gamma, &c);
    (Quadratic::centered(gamma, &c).expect("valid quadratic"), L2Ball::unit(2), xstar)
}

/// `‖w − (2, 1)‖ + 0.1‖w‖₁` with its minimum over the unit circle.
pub fn boundary_instance() -> (core_oracles::DistanceObjective, L2Ball, f64) {
    let f = core_oracles::DistanceObjective::new(dvector![2.0, 1.0], 0.1);
    let fstar = circle_min(&|a: f64| f.value(&dvector![a.cos(), a.sin()]));
    (f, L2Ball::unit(2), fstar)
}

/// Rank-one `n × n` completion with each entry observed with probability
/// `frac`; returns the problem and the target's nuclear norm.
pub fn completion_problem(seed: u64, n: usize, frac: f64) -> (MatrixCompletion, f64) {
    let mut rng = rng_from(seed);
    let u = gaussian_vector(&mut rng, n);
    let v = gaussian_vector(&mut rng, n);
    let m = &u * v.transpose();
    let mut mask = Vec::new();
    for j in 0..n {
        for i in 0..n {
            if rng.random::<f64>() < frac {
                mask.push((i, j));
            }
        }
    }
    let r = nuclear_norm(&m);
    (MatrixCompletion::new(m, mask).expect("valid completion problem"), r)
}

/// `t` quadratic losses with curvature spectrum in `[0.5, 3]`.
pub fn strongly_convex_sequence(seed: u64, d: usize, t: usize) -> Vec<LossDescriptor> {
    let mut rng = rng_from(seed);
    (0..t)
        .map(|_| LossDescriptor::Quadratic { q: spd_with_spectrum(&mut rng, d, 0.5, 3.0), theta: gaussian_vector(&mut rng, d) * 2.0 })
        .collect()
}
