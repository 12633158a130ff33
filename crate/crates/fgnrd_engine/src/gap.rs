use core_oracles::{FeasibleSet, ObjectiveOracle, Psi, Vector};
use learners::{argmin, Aggregate, LossDescriptor};

use crate::config::Payoff;

const CONJ_MAX_ITERS: usize = 100_000;
const CONJ_TOL: f64 = 1e-12;
const LIN_ZERO_TOL: f64 = 1e-12;

/// `sup_u ⟨u, y⟩ − h(u)` for an `l`-smooth `h` by gradient ascent with step
/// `1/l` from `start`.
fn conjugate_numeric(
    value: impl Fn(&Vector) -> f64,
    grad: impl Fn(&Vector) -> Vector,
    l: f64,
    y: &Vector,
    start: &Vector,
) -> f64 {
    let mut u = start.clone();
    if l.is_finite() && l > 0.0 {
        for _ in 0..CONJ_MAX_ITERS {
            let r = y - grad(&u);
            if r.norm() < CONJ_TOL {
                break;
            }
            u.axpy(1.0 / l, &r, 1.0);
        }
    }
    u.dot(y) - value(&u)
}

/// `sup_y g(x̄, y) − inf_x g(x, ȳ)`.
///
/// The sup is `f(x̄)` (plus the x-side term) by conjugacy. The inf is
/// `−∞` when `⟨x, ȳ⟩ + ψ(x)` is unbounded below on the set, giving `+∞`.
pub fn equilibrium_gap(
    x_bar: &Vector,
    y_bar: &Vector,
    f: &dyn ObjectiveOracle,
    set: &dyn FeasibleSet,
    payoff: &Payoff,
) -> f64 {
    let psi = payoff.x_psi();
    let sup = f.value(x_bar) + psi.value(x_bar);
    let conj = match payoff {
        Payoff::StronglyConvexSplit { mu, .. } => conjugate_numeric(
            |u| f.value(u) - 0.5 * mu * u.norm_squared(),
            |u| f.gradient(u) - u * *mu,
            f.smoothness() - mu,
            y_bar,
            x_bar,
        ),
        _ => match f.conjugate(y_bar) {
            Some(c) => c,
            None => conjugate_numeric(
                |u| f.value(u),
                |u| f.gradient(u),
                f.smoothness(),
                y_bar,
                x_bar,
            ),
        },
    };
    let mut agg = Aggregate::zeros(y_bar.len());
    // a linear term at rounding level on an unbounded set is read as zero
    let y_lin = if y_bar.norm() <= LIN_ZERO_TOL * (1.0 + x_bar.norm()) {
        Vector::zeros(y_bar.len())
    } else {
        y_bar.clone()
    };
    let zero_lin = y_lin.iter().all(|v| *v == 0.0) && !set.is_bounded();
    let lin = if zero_lin && matches!(psi, Psi::Zero | Psi::L1(_)) {
        0.0
    } else {
        match agg.add_loss(1.0, &LossDescriptor::Composite { theta: y_lin, psi }) {
            Ok(()) => argmin(&agg, set, x_bar)
                .map(|x| agg.value(&x))
                .unwrap_or(f64::NEG_INFINITY),
            Err(_) => f64::NEG_INFINITY,
        }
    };
    let inf = lin - conj;
    if inf == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    // the exact gap is nonnegative; clip rounding below zero
    (sup - inf).max(0.0)
}
