use std::sync::Arc;

use core_oracles::weights::adaptive_alpha;
use core_oracles::{FeasibleSet, FiniteSum, ObjectiveOracle, Psi, Trace, TraceRow, Vector};
use learners::{argmin, Aggregate, LearnerState, LossDescriptor, Strategy};

use crate::config::{GameConfig, GradientSource, InitRule, Ordering, Payoff};
use crate::error::EngineError;

/// Objective and feasible set a game is played on.
#[derive(Clone)]
pub struct Problem {
    pub f: Arc<dyn ObjectiveOracle>,
    pub components: Option<Arc<dyn FiniteSum>>,
    pub set: Arc<dyn FeasibleSet>,
}

impl Problem {
    pub fn new(f: Arc<dyn ObjectiveOracle>, set: Arc<dyn FeasibleSet>) -> Self {
        Problem {
            f,
            components: None,
            set,
        }
    }

    pub fn finite_sum(f: Arc<dyn FiniteSum>, set: Arc<dyn FeasibleSet>) -> Self {
        Problem {
            f: f.clone(),
            components: Some(f),
            set,
        }
    }
}

/// `f̃ = f − (μ/2)‖·‖²`.
pub struct ShiftedObjective {
    pub f: Arc<dyn ObjectiveOracle>,
    pub mu: f64,
}

impl ObjectiveOracle for ShiftedObjective {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn value(&self, w: &Vector) -> f64 {
        self.f.value(w) - 0.5 * self.mu * w.norm_squared()
    }

    fn gradient(&self, w: &Vector) -> Vector {
        self.f.gradient(w) - w * self.mu
    }

    fn smoothness(&self) -> f64 {
        self.f.smoothness() - self.mu
    }

    fn strong_convexity(&self) -> f64 {
        (self.f.strong_convexity() - self.mu).max(0.0)
    }
}

#[derive(Debug, Clone)]
pub struct GameOutput {
    pub x_bar: Vector,
    pub y_bar: Vector,
    /// `x̄_1, …, x̄_T`.
    pub x_bar_path: Vec<Vector>,
    /// `x_1, …, x_T`.
    pub x_path: Vec<Vector>,
    pub x0: Vector,
    pub regret_x: Option<f64>,
    pub regret_y: Option<f64>,
    /// `f_value` is the objective of the optimization problem at `x̄_t`
    /// (`f + ψ` for composite payoffs), `gap` the regret-sum bound
    /// `(Regˣ + Regʸ)/A_t`. Extras: `alpha`, `a_t`, `nu` (running minimum of
    /// `‖Σ α_s y_s‖`), `regret_x`, `regret_y`.
    pub trace: Trace,
}

fn resolve_x0(cfg: &GameConfig, p: &Problem) -> Result<Vector, EngineError> {
    let d = p.set.dim();
    match &cfg.x0 {
        Some(v) => {
            if v.len() != d {
                return Err(EngineError::config(format!(
                    "x0 has length {}, expected {d}",
                    v.len()
                )));
            }
            Ok(Vector::from_column_slice(v))
        }
        None => {
            let c = p.set.canonical_point();
            match cfg.init {
                InitRule::CanonicalPoint => Ok(c),
                InitRule::Origin => Ok(Vector::zeros(d)),
                InitRule::LmoAtCanonical => {
                    Ok(core_oracles::lmo(p.set.as_ref(), &p.f.gradient(&c))?)
                }
            }
        }
    }
}

fn validate(cfg: &GameConfig, p: &Problem) -> Result<(), EngineError> {
    if cfg.t_max == 0 {
        return Err(EngineError::config("t_max must be at least 1"));
    }
    if p.f.dim() != p.set.dim() {
        return Err(EngineError::config("objective and set dimensions differ"));
    }
    cfg.weights.validate()?;
    if cfg.weights.alpha(1).is_some() && cfg.weights.cum_a(cfg.t_max).is_none() {
        return Err(EngineError::config(
            "custom weight sequence shorter than t_max",
        ));
    }
    if cfg.weights.is_adaptive()
        && (cfg.x_strategy != Strategy::BestResp
            || !matches!(cfg.y_strategy, Strategy::Ftl | Strategy::Ftpl { .. })
            || cfg.ordering != Ordering::YFirst)
        {
            return Err(EngineError::config(
                "adaptive weights need a y-first FTL/FTPL y-player and a BestResp+ x-player",
            ));
        }
    if let Payoff::StronglyConvexSplit { mu, l_phi } = cfg.payoff {
        if !(mu > 0.0 && mu <= p.f.smoothness()) {
            return Err(EngineError::config(format!(
                "split payoff needs 0 < mu <= L (mu = {mu})"
            )));
        }
        if !(l_phi > 0.0) {
            return Err(EngineError::config("split payoff needs L_phi > 0"));
        }
    }
    if cfg.gradient_source == GradientSource::CyclicComponents {
        if p.components.is_none() {
            return Err(EngineError::config(
                "cyclic gradients need a finite-sum objective",
            ));
        }
        if cfg.ordering != Ordering::YFirst {
            return Err(EngineError::config(
                "cyclic gradients are only defined for y-first play",
            ));
        }
    }
    Ok(())
}

struct Cyclic {
    fs: Arc<dyn FiniteSum>,
    parts: Vec<Vector>,
}

impl Cyclic {
    fn new(fs: Arc<dyn FiniteSum>, w0: &Vector) -> Self {
        let n = fs.n_components();
        let parts = (0..n)
            .map(|i| fs.component_gradient(i, w0) / n as f64)
            .collect();
        Cyclic { fs, parts }
    }

    fn step(&mut self, t: usize, at: &Vector) -> Vector {
        let n = self.parts.len();
        let i = (t - 1) % n;
        self.parts[i] = self.fs.component_gradient(i, at) / n as f64;
        self.parts
            .iter()
            .fold(Vector::zeros(at.len()), |acc, g| acc + g)
    }
}

/// `min_{x∈K} ⟨x, S⟩ + A ψ(x)` when the minimizer exists.
fn best_in_hindsight(
    sum_ay: &Vector,
    a: f64,
    psi: &Psi,
    set: &dyn FeasibleSet,
    warm: &Vector,
) -> Option<f64> {
    let mut agg = Aggregate::zeros(sum_ay.len());
    agg.add_loss(
        1.0,
        &LossDescriptor::Composite {
            theta: sum_ay.clone(),
            psi: psi.scaled(a),
        },
    )
    .ok()?;
    let x = argmin(&agg, set, warm).ok()?;
    Some(agg.value(&x))
}

pub fn run_dynamics(cfg: &GameConfig, p: &Problem) -> Result<GameOutput, EngineError> {
    validate(cfg, p)?;
    let d = p.set.dim();
    let x0 = resolve_x0(cfg, p)?;
    let psi = cfg.payoff.x_psi();
    let y_obj: Arc<dyn ObjectiveOracle> = match cfg.payoff {
        Payoff::StronglyConvexSplit { mu, .. } => Arc::new(ShiftedObjective { f: p.f.clone(), mu }),
        _ => p.f.clone(),
    };
    let comparator = match &cfg.comparator {
        Some(c) if c.len() != d => {
            return Err(EngineError::config("comparator dimension mismatch"))
        }
        Some(c) => Some(Vector::from_column_slice(c)),
        None => None,
    };

    let mut cyclic = match cfg.gradient_source {
        GradientSource::CyclicComponents => {
            Some(Cyclic::new(p.components.clone().expect("validated"), &x0))
        }
        GradientSource::Full => None,
    };
    let mut y_learner = match cyclic {
        Some(_) => None,
        None => Some(
            LearnerState::over_gradients(cfg.y_strategy.clone(), y_obj.clone(), x0.clone())
                .map_err(|e| EngineError::at(0, e))?,
        ),
    };
    let mut x_learner = LearnerState::over_set(cfg.x_strategy.clone(), p.set.clone(), x0.clone())
        .map_err(|e| EngineError::at(0, e))?;

    let mut trace = Trace::new(&["alpha", "a_t", "nu", "regret_x", "regret_y"]);
    let mut a_t = 0.0;
    let mut sum_ax = Vector::zeros(d);
    let mut sum_ay = Vector::zeros(d);
    let mut cum_x = 0.0;
    let mut cum_y = Some(0.0);
    let mut x_prev = x0.clone();
    let mut y_prev: Option<Vector> = None;
    let mut x_bar = x0.clone();
    let mut nu = f64::INFINITY;
    let mut x_bar_path = Vec::with_capacity(cfg.t_max);
    let mut x_path = Vec::with_capacity(cfg.t_max);
    let (mut regret_x, mut regret_y) = (None, None);

    let x_loss = |y: &Vector| -> LossDescriptor {
        if psi.is_zero() {
            LossDescriptor::Linear(y.clone())
        } else {
            LossDescriptor::Composite {
                theta: y.clone(),
                psi,
            }
        }
    };

    for t in 1..=cfg.t_max {
        let alpha_sched = cfg.weights.alpha(t);
        let alpha_act = alpha_sched.unwrap_or(1.0);
        let (x, y, anchor) = match cfg.ordering {
            Ordering::YFirst => {
                let (y, anchor) = match (&mut cyclic, &mut y_learner) {
                    (Some(c), _) => (c.step(t, &x_bar), None),
                    (None, Some(yl)) => {
                        let hint = LossDescriptor::FenchelY { x: x_prev.clone() };
                        let hint = if yl.strategy().uses_hint() {
                            Some(&hint)
                        } else {
                            None
                        };
                        let y = yl
                            .act(alpha_act, None, hint)
                            .map_err(|e| EngineError::at(t, e))?;
                        (y, yl.current_anchor().cloned())
                    }
                    (None, None) => unreachable!(),
                };
                let loss = x_loss(&y);
                let x = x_learner
                    .act(alpha_act, Some(&loss), None)
                    .map_err(|e| EngineError::at(t, e))?;
                (x, y, anchor)
            }
            Ordering::XFirst => {
                let hint = y_prev.as_ref().map(&x_loss);
                let hint = if x_learner.strategy().uses_hint() {
                    hint.as_ref()
                } else {
                    None
                };
                let x = x_learner
                    .act(alpha_act, None, hint)
                    .map_err(|e| EngineError::at(t, e))?;
                let yl = y_learner.as_mut().expect("x-first play uses a y learner");
                let cur = LossDescriptor::FenchelY { x: x.clone() };
                let y = yl
                    .act(alpha_act, Some(&cur), None)
                    .map_err(|e| EngineError::at(t, e))?;
                (x, y.clone(), yl.current_anchor().cloned())
            }
        };
        let alpha = match alpha_sched {
            Some(a) => a,
            // ∇ℓ_t(y_t) = x_t − x̄_{t−1} for the FTL y-player
            None => adaptive_alpha((&x - &x_bar).norm()),
        };

        if let Some(yl) = y_learner.as_mut() {
            yl.observe(alpha, LossDescriptor::FenchelY { x: x.clone() })
                .map_err(|e| EngineError::at(t, e))?;
        }
        x_learner
            .observe(alpha, x_loss(&y))
            .map_err(|e| EngineError::at(t, e))?;

        a_t += alpha;
        sum_ax.axpy(alpha, &x, 1.0);
        sum_ay.axpy(alpha, &y, 1.0);
        cum_x += alpha * (x.dot(&y) + psi.value(&x));
        cum_y = match (cum_y, &anchor) {
            (Some(acc), Some(u)) => Some(acc + alpha * (u.dot(&y) - y_obj.value(u) - x.dot(&y))),
            (Some(acc), None) => y_obj.conjugate(&y).map(|c| acc + alpha * (c - x.dot(&y))),
            (None, _) => None,
        };
        x_bar = &sum_ax / a_t;
        nu = nu.min(sum_ay.norm());

        let comp_value = match &comparator {
            Some(c) => Some(c.dot(&sum_ay) + a_t * psi.value(c)),
            None => best_in_hindsight(&sum_ay, a_t, &psi, p.set.as_ref(), &x_bar),
        };
        regret_x = comp_value.map(|v| cum_x - v);
        regret_y = cum_y.map(|c| c + a_t * y_obj.value(&x_bar));
        let gap = match (regret_x, regret_y) {
            (Some(rx), Some(ry)) => Some((rx + ry) / a_t),
            _ => None,
        };

        let f_val = match cfg.payoff {
            Payoff::Composite { .. } => p.f.value(&x_bar) + psi.value(&x_bar),
            _ => p.f.value(&x_bar),
        };
        trace.push(
            TraceRow::new(t as u64, f_val, p.f.gradient(&x_bar).norm())
                .with_gap(gap)
                .with_extras(vec![Some(alpha), Some(a_t), Some(nu), regret_x, regret_y]),
        );

        x_bar_path.push(x_bar.clone());
        x_path.push(x.clone());
        x_prev = x;
        y_prev = Some(y);
    }

    Ok(GameOutput {
        y_bar: &sum_ay / a_t,
        x_bar,
        x_bar_path,
        x_path,
        x0,
        regret_x,
        regret_y,
        trace,
    })
}
