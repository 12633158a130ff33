//! Exact or near-exact minimizers of learner subproblems.

use core_oracles::linalg::sym_extreme_eigenvalues;
use core_oracles::{FeasibleSet, Matrix, Psi, Vector};

use crate::error::LearnerError;
use crate::loss::Aggregate;

pub const SOLVER_TOL: f64 = 1e-10;
pub const SOLVER_MAX_ITERS: usize = 10_000;

/// `argmin_{z ∈ K}` of an [`Aggregate`].
///
/// Dispatch: pure linear terms go to the LMO; isotropic quadratics use a
/// projection or proximal closed form; general quadratics use Cholesky when
/// unconstrained and accelerated projected/proximal gradient otherwise.
pub fn argmin(agg: &Aggregate, set: &dyn FeasibleSet, warm: &Vector) -> Result<Vector, LearnerError> {
    if agg.is_linear() {
        if !set.is_bounded() {
            return Err(LearnerError::Unbounded);
        }
        return Ok(set.lmo(&agg.theta));
    }
    if agg.quad.is_none() {
        if agg.iso > 0.0 {
            let center = &agg.theta * (-1.0 / agg.iso);
            return closed_prox(set, &center, 1.0 / agg.iso, agg.l1);
        }
        if !set.is_bounded() {
            return Err(LearnerError::Unbounded);
        }
        return Err(LearnerError::Unsupported("linear plus l1 term without curvature".into()));
    }
    let q = agg.quad.as_ref().expect("checked above");
    let h = q + Matrix::identity(q.nrows(), q.ncols()) * agg.iso;
    if !set.is_bounded() && agg.l1 == 0.0 {
        let chol = h
            .clone()
            .cholesky()
            .ok_or(LearnerError::Unsupported("unconstrained quadratic subproblem is not strictly convex".into()))?;
        return Ok(chol.solve(&(-&agg.theta)));
    }
    let (lmin, lmax) = sym_extreme_eigenvalues(&h);
    if lmin < -1e-12 {
        return Err(LearnerError::Unsupported("non-convex quadratic subproblem".into()));
    }
    if !set.is_bounded() && lmin <= 0.0 {
        return Err(LearnerError::Unbounded);
    }
    accelerated_prox_gradient(&h, &agg.theta, agg.l1, set, warm, lmax)
}

fn closed_prox(set: &dyn FeasibleSet, v: &Vector, lam: f64, l1: f64) -> Result<Vector, LearnerError> {
    let psi = if l1 > 0.0 { Psi::L1(l1) } else { Psi::Zero };
    set.prox(v, lam, &psi)
        .ok_or_else(|| LearnerError::Unsupported(format!("no closed-form prox for {psi:?} on this set")))
}

fn accelerated_prox_gradient(
    h: &Matrix,
    theta: &Vector,
    l1: f64,
    set: &dyn FeasibleSet,
    warm: &Vector,
    lmax: f64,
) -> Result<Vector, LearnerError> {
    let step = 1.0 / lmax.max(1e-300);
    let start = if set.contains(warm, core_oracles::FEAS_TOL) { warm.clone() } else { set.canonical_point() };
    let mut x = start.clone();
    let mut y = start;
    let mut tk: f64 = 1.0;
    let mut last = f64::INFINITY;
    for _ in 0..SOLVER_MAX_ITERS {
        let g = h * &y + theta;
        let x_new = closed_prox(set, &(&y - &g * step), step, l1)?;
        let dx = (&x_new - &x).norm();
        let t_new = 0.5 * (1.0 + (1.0 + 4.0 * tk * tk).sqrt());
        // gradient-based adaptive restart
        let restart = (&y - &x_new).dot(&(&x_new - &x)) > 0.0;
        if restart {
            y = x_new.clone();
            tk = 1.0;
        } else {
            y = &x_new + (&x_new - &x) * ((tk - 1.0) / t_new);
            tk = t_new;
        }
        x = x_new;
        last = dx;
        if dx <= SOLVER_TOL * (1.0 + x.norm()) {
            return Ok(x);
        }
    }
    Err(LearnerError::Divergent { iterations: SOLVER_MAX_ITERS, last_step: last })
}

/// `argmin_{x ∈ K} η⟨L, x⟩ + γ_K(x)²` for a gauge set: `ρ·z*` with
/// `z* = lmo(L)` and `ρ = clamp(-(η/2)⟨L, z*⟩, 0, 1)`.
pub fn gauge_ftrl_plus_solve(l: &Vector, eta: f64, set: &dyn FeasibleSet) -> Result<Vector, LearnerError> {
    if !(eta > 0.0) {
        return Err(LearnerError::NonPositiveStep("eta", eta));
    }
    if set.gauge(&Vector::zeros(set.dim())).is_none() {
        return Err(LearnerError::Unsupported("set exposes no gauge".into()));
    }
    if l.norm() == 0.0 {
        return Ok(Vector::zeros(set.dim()));
    }
    let z = set.lmo(l);
    let rho = (-(eta / 2.0) * l.dot(&z)).clamp(0.0, 1.0);
    Ok(z * rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core_oracles::{L2Ball, Unconstrained};
    use nalgebra::{dmatrix, dvector};

    #[test]
    fn unconstrained_iso_closed_form() {
        let mut a = Aggregate::zeros(2);
        a.theta = dvector![1.0, -2.0];
        a.iso = 2.0;
        let z = argmin(&a, &Unconstrained::new(2), &Vector::zeros(2)).unwrap();
        assert_eq!(z, dvector![-0.5, 1.0]);
    }

    #[test]
    fn constrained_quadratic_matches_kkt() {
        // min ½ zᵀdiag(1,4)z - ⟨(3,0), z⟩ over the unit ball: optimum (1,0).
        let mut a = Aggregate::zeros(2);
        a.theta = dvector![-3.0, 0.0];
        a.quad = Some(dmatrix![1.0, 0.0; 0.0, 4.0]);
        let z = argmin(&a, &L2Ball::unit(2), &Vector::zeros(2)).unwrap();
        assert!((z - dvector![1.0, 0.0]).norm() < 1e-8);
    }

    #[test]
    fn linear_unbounded_rejected() {
        let mut a = Aggregate::zeros(2);
        a.theta = dvector![1.0, 0.0];
        assert_eq!(argmin(&a, &Unconstrained::new(2), &Vector::zeros(2)), Err(LearnerError::Unbounded));
    }

    #[test]
    fn gauge_solve_examples() {
        let b = L2Ball::unit(2);
        assert_eq!(gauge_ftrl_plus_solve(&Vector::zeros(2), 1.0, &b).unwrap(), Vector::zeros(2));
        let x = gauge_ftrl_plus_solve(&dvector![-4.0, 0.0], 1.0, &b).unwrap();
        assert!((x - dvector![1.0, 0.0]).norm() < 1e-15);
        let x = gauge_ftrl_plus_solve(&dvector![-1.0, 0.0], 1.0, &b).unwrap();
        assert!((x - dvector![0.5, 0.0]).norm() < 1e-15);
    }
}
