use core_oracles::{FeasibleSet, ObjectiveOracle, Trace, TraceRow, Vector};
use learners::gauge_ftrl_plus_solve;

use crate::error::ProjectionFreeError;

#[derive(Debug, Clone)]
pub struct GaugeFwConfig {
    /// Defaults to `λ/(4L)` with `λ` the squared-gauge strong convexity.
    pub eta: Option<f64>,
    pub t_max: usize,
    /// Hint point for `x̃_1`; defaults to the origin, the minimizer of `γ²`.
    pub x0: Option<Vector>,
}

impl Default for GaugeFwConfig {
    fn default() -> Self {
        GaugeFwConfig { eta: None, t_max: 100, x0: None }
    }
}

/// Gauge Frank-Wolfe with `α_t = t`: the y-player plays `∇f(x̃_t)` and the
/// x-player solves FTRL+ with the squared gauge through one LMO call.
///
/// Extras per row: `rho` (gauge of `x_t`) and `eta`.
pub fn gauge_fw(
    f: &dyn ObjectiveOracle,
    set: &dyn FeasibleSet,
    cfg: &GaugeFwConfig,
) -> Result<(Vector, Trace), ProjectionFreeError> {
    let lambda = set.gauge_sq_strong_convexity().ok_or(ProjectionFreeError::NoGauge)?;
    let d = set.dim();
    if f.dim() != d {
        return Err(ProjectionFreeError::Shape("objective and set dimensions differ".into()));
    }
    let eta = match cfg.eta {
        Some(e) => e,
        None => lambda / (4.0 * f.smoothness()),
    };
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(ProjectionFreeError::Invalid("eta", format!("{eta}")));
    }
    let mut trace = Trace::new(&["rho", "eta"]);
    let mut prev = cfg.x0.clone().unwrap_or_else(|| Vector::zeros(d));
    let mut sum_ax = Vector::zeros(d);
    let mut cum_l = Vector::zeros(d);
    let mut a_prev = 0.0;
    for t in 1..=cfg.t_max {
        let alpha = t as f64;
        let a_t = a_prev + alpha;
        let x_tilde = (&prev * alpha + &sum_ax) / a_t;
        let y = f.gradient(&x_tilde);
        cum_l.axpy(alpha, &y, 1.0);
        let x = gauge_ftrl_plus_solve(&cum_l, eta, set)?;
        sum_ax.axpy(alpha, &x, 1.0);
        a_prev = a_t;
        let xbar = &sum_ax / a_t;
        trace.push(
            TraceRow::new(t as u64, f.value(&xbar), f.gradient(&xbar).norm())
                .with_extras(vec![set.gauge(&x), Some(eta)]),
        );
        prev = x;
    }
    Ok((sum_ax / a_prev.max(f64::MIN_POSITIVE), trace))
}
