use core_oracles::{FeasibleSet, ObjectiveOracle, Trace, TraceRow, Vector};

use crate::error::ProjectionFreeError;

/// Boundary Frank-Wolfe: `x_t = lmo(Σ_{s<t} ∂f(x_s))` for `t ≥ 2`, uniform
/// average output.
///
/// Extras per row: `gauge` of `x_t` (if the set has one), `theta_norm`
/// `‖Θ_t‖` for the averaged subgradient `Θ_t`, `l_t = min_{s≤t} ‖Θ_s‖` and
/// `nu_t = min_{s≤t} ‖Σ_{r≤s} ∂f(x_r)‖`. A vanishing cumulative
/// subgradient is flagged in the trace metadata and the run continues with
/// the LMO tie-break.
pub fn boundary_fw(
    f: &dyn ObjectiveOracle,
    set: &dyn FeasibleSet,
    t_max: usize,
    x1: &Vector,
) -> Result<(Vector, Trace), ProjectionFreeError> {
    let lambda = set.strong_convexity();
    if !(lambda > 0.0) {
        return Err(ProjectionFreeError::NotStronglyConvex(lambda));
    }
    if x1.len() != set.dim() || f.dim() != set.dim() {
        return Err(ProjectionFreeError::Shape("x1, f and the set must share a dimension".into()));
    }
    let mut trace = Trace::new(&["gauge", "theta_norm", "l_t", "nu_t"]);
    let d = set.dim();
    let mut sum_grad = Vector::zeros(d);
    let mut sum_x = Vector::zeros(d);
    let mut x = x1.clone();
    let mut l_t = f64::INFINITY;
    let mut nu_t = f64::INFINITY;
    for t in 1..=t_max {
        if t >= 2 {
            if sum_grad.norm() < 1e-12 {
                trace.flag(format!("cumulative subgradient vanished at t = {t}"));
            }
            x = set.lmo(&sum_grad);
        }
        sum_grad += f.gradient(&x);
        sum_x += &x;
        let theta_norm = sum_grad.norm() / t as f64;
        l_t = l_t.min(theta_norm);
        nu_t = nu_t.min(sum_grad.norm());
        let xbar = &sum_x / t as f64;
        trace.push(TraceRow::new(t as u64, f.value(&xbar), f.gradient(&xbar).norm()).with_extras(vec![
            set.gauge(&x),
            Some(theta_norm),
            Some(l_t),
            Some(nu_t),
        ]));
    }
    Ok((sum_x / t_max.max(1) as f64, trace))
}
