use std::sync::Arc;

use core_oracles::random::gaussian_vector;
use core_oracles::seed::{derive_seed2, rng_from};
use core_oracles::{BregmanGeometry, FeasibleSet, ObjectiveOracle, Vector};
use serde::{Deserialize, Serialize};

use crate::error::LearnerError;
use crate::loss::{Aggregate, LossDescriptor, Regularizer};
use crate::solve::{argmin, gauge_ftrl_plus_solve};

pub const DEFAULT_FTPL_SAMPLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Strategy {
    Ftl,
    FtlPlus,
    OptimisticFtl,
    Ftrl { reg: Regularizer, eta: f64 },
    FtrlPlus { reg: Regularizer, eta: f64 },
    OptimisticFtrl { reg: Regularizer, eta: f64 },
    BestResp,
    OmdPlus { geometry: BregmanGeometry, gamma: f64 },
    Ftpl { noise_scale: f64, n_samples: usize, seed: u64 },
}

impl Strategy {
    /// Whether the strategy uses the current round's loss.
    pub fn is_prescient(&self) -> bool {
        matches!(self, Strategy::FtlPlus | Strategy::FtrlPlus { .. } | Strategy::BestResp | Strategy::OmdPlus { .. })
    }

    pub fn uses_hint(&self) -> bool {
        matches!(self, Strategy::OptimisticFtl | Strategy::OptimisticFtrl { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Ftl => "FTL",
            Strategy::FtlPlus => "FTL+",
            Strategy::OptimisticFtl => "OptimisticFTL",
            Strategy::Ftrl { .. } => "FTRL",
            Strategy::FtrlPlus { .. } => "FTRL+",
            Strategy::OptimisticFtrl { .. } => "OptimisticFTRL",
            Strategy::BestResp => "BestResp+",
            Strategy::OmdPlus { .. } => "OMD+",
            Strategy::Ftpl { .. } => "FTPL",
        }
    }

    fn validate(&self) -> Result<(), LearnerError> {
        match self {
            Strategy::Ftrl { eta, .. } | Strategy::FtrlPlus { eta, .. } | Strategy::OptimisticFtrl { eta, .. } => {
                if !(*eta > 0.0) {
                    return Err(LearnerError::NonPositiveStep("eta", *eta));
                }
            }
            Strategy::OmdPlus { gamma, .. } => {
                if !(*gamma > 0.0) {
                    return Err(LearnerError::NonPositiveStep("gamma", *gamma));
                }
            }
            Strategy::Ftpl { noise_scale, n_samples, .. } => {
                if *n_samples == 0 {
                    return Err(LearnerError::Unsupported("FTPL needs at least one sample".into()));
                }
                if !(*noise_scale >= 0.0) {
                    return Err(LearnerError::NonPositiveStep("noise_scale", *noise_scale));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// Where the learner's actions live.
#[derive(Clone)]
pub enum Domain {
    /// A feasible set with linear, quadratic or composite losses.
    Set(Arc<dyn FeasibleSet>),
    /// The gradient space of `f`, with Fenchel losses.
    Gradient(Arc<dyn ObjectiveOracle>),
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Set(s) => s.dim(),
            Domain::Gradient(f) => f.dim(),
        }
    }
}

/// One completed round.
#[derive(Debug, Clone)]
pub struct Round {
    pub alpha: f64,
    pub loss: LossDescriptor,
    pub action: Vector,
    /// For gradient-domain actions `y = ∇f(u)`, the point `u`.
    pub anchor: Option<Vector>,
}

struct Action {
    z: Vector,
    anchor: Option<Vector>,
}

pub struct LearnerState {
    strategy: Strategy,
    domain: Domain,
    z_init: Vector,
    init_anchor: Option<Vector>,
    agg: Aggregate,
    x_sum: Vector,
    a_sum: f64,
    history: Vec<Round>,
    current_action: Vector,
    current_anchor: Option<Vector>,
    cumulative_weighted_loss: Option<f64>,
}

impl LearnerState {
    /// Learner over a feasible set, starting from `z_init` (also the OMD+ prox center).
    pub fn over_set(strategy: Strategy, set: Arc<dyn FeasibleSet>, z_init: Vector) -> Result<Self, LearnerError> {
        strategy.validate()?;
        if z_init.len() != set.dim() {
            return Err(core_oracles::OracleError::DimensionMismatch { expected: set.dim(), got: z_init.len() }.into());
        }
        if let Strategy::OmdPlus { geometry, .. } = &strategy {
            geometry.validate(set.dim())?;
            geometry.grad_phi(&z_init)?;
        }
        if let Strategy::Ftrl { reg: Regularizer::SqGauge, .. }
        | Strategy::FtrlPlus { reg: Regularizer::SqGauge, .. }
        | Strategy::OptimisticFtrl { reg: Regularizer::SqGauge, .. } = &strategy
        {
            if set.gauge(&Vector::zeros(set.dim())).is_none() {
                return Err(LearnerError::Unsupported("squared-gauge regularizer needs a gauge set".into()));
            }
        }
        let d = set.dim();
        Ok(LearnerState {
            strategy,
            domain: Domain::Set(set),
            current_action: z_init.clone(),
            z_init,
            init_anchor: None,
            agg: Aggregate::zeros(d),
            x_sum: Vector::zeros(d),
            a_sum: 0.0,
            history: Vec::new(),
            current_anchor: None,
            cumulative_weighted_loss: Some(0.0),
        })
    }

    /// Learner on the gradient space of `f`; its initial action is `∇f(init_point)`.
    pub fn over_gradients(strategy: Strategy, f: Arc<dyn ObjectiveOracle>, init_point: Vector) -> Result<Self, LearnerError> {
        strategy.validate()?;
        match &strategy {
            Strategy::Ftrl { reg, .. } | Strategy::FtrlPlus { reg, .. } | Strategy::OptimisticFtrl { reg, .. }
                if *reg != Regularizer::Zero =>
            {
                return Err(LearnerError::Unsupported("regularized FTRL on the gradient space".into()))
            }
            Strategy::OmdPlus { .. } => return Err(LearnerError::Unsupported("OMD+ on the gradient space".into())),
            _ => {}
        }
        let d = f.dim();
        let z_init = f.gradient(&init_point);
        Ok(LearnerState {
            strategy,
            current_action: z_init.clone(),
            z_init,
            current_anchor: Some(init_point.clone()),
            init_anchor: Some(init_point),
            domain: Domain::Gradient(f),
            agg: Aggregate::zeros(d),
            x_sum: Vector::zeros(d),
            a_sum: 0.0,
            history: Vec::new(),
            cumulative_weighted_loss: Some(0.0),
        })
    }

    pub fn strategy(&self) -> &Strategy {
        &self.strategy
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn history(&self) -> &[Round] {
        &self.history
    }

    pub fn round(&self) -> usize {
        self.history.len() + 1
    }

    pub fn current_action(&self) -> &Vector {
        &self.current_action
    }

    pub fn current_anchor(&self) -> Option<&Vector> {
        self.current_anchor.as_ref()
    }

    pub fn cumulative_weight(&self) -> f64 {
        self.history.iter().map(|r| r.alpha).sum()
    }

    /// `Σ α_t ℓ_t(z_t)`; `None` when a Fenchel action lacks an anchor.
    pub fn cumulative_weighted_loss(&self) -> Option<f64> {
        self.cumulative_weighted_loss
    }

    pub fn aggregate(&self) -> &Aggregate {
        &self.agg
    }

    /// Commits to this round's action.
    pub fn act(
        &mut self,
        alpha: f64,
        current: Option<&LossDescriptor>,
        hint: Option<&LossDescriptor>,
    ) -> Result<Vector, LearnerError> {
        if !(alpha > 0.0) {
            return Err(LearnerError::NonPositiveStep("alpha", alpha));
        }
        let a = match self.strategy.clone() {
            Strategy::Ftl => self.ftl_action()?,
            Strategy::FtlPlus => {
                let cur = current.ok_or(LearnerError::NeedsCurrentLoss("FTL+"))?;
                self.follow_action(Some((alpha, cur)), None)?
            }
            Strategy::OptimisticFtl => self.optimistic_action(alpha, hint, None)?,
            Strategy::Ftrl { reg, eta } => self.follow_action(None, Some((&reg, eta)))?,
            Strategy::FtrlPlus { reg, eta } => {
                let cur = current.ok_or(LearnerError::NeedsCurrentLoss("FTRL+"))?;
                self.follow_action(Some((alpha, cur)), Some((&reg, eta)))?
            }
            Strategy::OptimisticFtrl { reg, eta } => self.optimistic_action(alpha, hint, Some((&reg, eta)))?,
            Strategy::BestResp => {
                let cur = current.ok_or(LearnerError::NeedsCurrentLoss("BestResp+"))?;
                self.best_resp_action(cur)?
            }
            Strategy::OmdPlus { geometry, gamma } => {
                let cur = current.ok_or(LearnerError::NeedsCurrentLoss("OMD+"))?;
                self.omd_action(alpha, cur, &geometry, gamma)?
            }
            Strategy::Ftpl { noise_scale, n_samples, seed } => self.ftpl_action(noise_scale, n_samples, seed)?,
        };
        self.current_action = a.z.clone();
        self.current_anchor = a.anchor;
        Ok(a.z)
    }

    /// Records this round's weight and loss against the committed action.
    pub fn observe(&mut self, alpha: f64, loss: LossDescriptor) -> Result<(), LearnerError> {
        if !(alpha > 0.0) {
            return Err(LearnerError::NonPositiveStep("alpha", alpha));
        }
        if loss.dim() != self.domain.dim() {
            return Err(LearnerError::IncompatibleLoss("dimension mismatch"));
        }
        let value = match (&self.domain, &loss) {
            (Domain::Set(_), l) if !l.is_fenchel() => {
                self.agg.add_loss(alpha, l)?;
                l.value(&self.current_action)
            }
            (Domain::Gradient(f), LossDescriptor::FenchelY { x }) => {
                self.x_sum.axpy(alpha, x, 1.0);
                self.a_sum += alpha;
                match &self.current_anchor {
                    Some(u) => loss.fenchel_value_at_anchor(f.as_ref(), &self.current_action, u),
                    None => f.conjugate(&self.current_action).map(|c| c - x.dot(&self.current_action)),
                }
            }
            _ => return Err(LearnerError::IncompatibleLoss("loss kind does not match the domain")),
        };
        self.cumulative_weighted_loss = match (self.cumulative_weighted_loss, value) {
            (Some(acc), Some(v)) => Some(acc + alpha * v),
            _ => None,
        };
        self.history.push(Round {
            alpha,
            loss,
            action: self.current_action.clone(),
            anchor: self.current_anchor.clone(),
        });
        Ok(())
    }

    fn ftl_action(&self) -> Result<Action, LearnerError> {
        self.follow_action(None, None)
    }

    fn optimistic_action(
        &self,
        alpha: f64,
        hint: Option<&LossDescriptor>,
        reg: Option<(&Regularizer, f64)>,
    ) -> Result<Action, LearnerError> {
        match hint {
            Some(h) => self.follow_action(Some((alpha, h)), reg),
            None if self.history.is_empty() && reg.is_none_or(|(r, _)| *r == Regularizer::Zero) => {
                Err(LearnerError::NeedsHint)
            }
            None => self.follow_action(None, reg),
        }
    }

    /// `argmin Σ_{s<t} α_s ℓ_s + α ℓ_extra + R/η`.
    fn follow_action(
        &self,
        extra: Option<(f64, &LossDescriptor)>,
        reg: Option<(&Regularizer, f64)>,
    ) -> Result<Action, LearnerError> {
        let reg = reg.filter(|(r, _)| **r != Regularizer::Zero);
        match &self.domain {
            Domain::Gradient(f) => {
                let mut sum = self.x_sum.clone();
                let mut a = self.a_sum;
                if let Some((alpha, loss)) = extra {
                    match loss {
                        LossDescriptor::FenchelY { x } => {
                            sum.axpy(alpha, x, 1.0);
                            a += alpha;
                        }
                        _ => return Err(LearnerError::IncompatibleLoss("gradient-space learners take Fenchel losses")),
                    }
                }
                if a == 0.0 {
                    return Ok(Action { z: self.z_init.clone(), anchor: self.init_anchor.clone() });
                }
                let u = sum / a;
                Ok(Action { z: f.gradient(&u), anchor: Some(u) })
            }
            Domain::Set(set) => {
                if extra.is_none() && reg.is_none() && self.history.is_empty() {
                    return Ok(Action { z: self.z_init.clone(), anchor: None });
                }
                let mut agg = self.agg.clone();
                if let Some((alpha, loss)) = extra {
                    agg.add_loss(alpha, loss)?;
                }
                if let Some((Regularizer::SqGauge, eta)) = reg {
                    if !agg.is_linear() {
                        return Err(LearnerError::Unsupported("squared gauge with non-linear losses".into()));
                    }
                    return Ok(Action { z: gauge_ftrl_plus_solve(&agg.theta, eta, set.as_ref())?, anchor: None });
                }
                if let Some((r, eta)) = reg {
                    agg.add_regularizer(r, eta)?;
                }
                Ok(Action { z: argmin(&agg, set.as_ref(), &self.current_action)?, anchor: None })
            }
        }
    }

    fn best_resp_action(&self, cur: &LossDescriptor) -> Result<Action, LearnerError> {
        match &self.domain {
            Domain::Gradient(f) => match cur {
                LossDescriptor::FenchelY { x } => Ok(Action { z: f.gradient(x), anchor: Some(x.clone()) }),
                _ => Err(LearnerError::IncompatibleLoss("gradient-space learners take Fenchel losses")),
            },
            Domain::Set(set) => {
                let mut agg = Aggregate::zeros(set.dim());
                agg.add_loss(1.0, cur)?;
                Ok(Action { z: argmin(&agg, set.as_ref(), &self.current_action)?, anchor: None })
            }
        }
    }

    fn omd_action(
        &self,
        alpha: f64,
        cur: &LossDescriptor,
        geometry: &BregmanGeometry,
        gamma: f64,
    ) -> Result<Action, LearnerError> {
        let set = match &self.domain {
            Domain::Set(s) => s,
            Domain::Gradient(_) => return Err(LearnerError::Unsupported("OMD+ on the gradient space".into())),
        };
        let prev = &self.current_action;
        if *geometry == BregmanGeometry::Euclidean {
            let mut agg = Aggregate::zeros(set.dim());
            agg.add_loss(alpha, cur)?;
            agg.iso += 1.0 / gamma;
            agg.theta.axpy(-1.0 / gamma, prev, 1.0);
            return Ok(Action { z: argmin(&agg, set.as_ref(), prev)?, anchor: None });
        }
        let theta = match cur {
            LossDescriptor::Linear(t) => t * (gamma * alpha),
            _ => return Err(LearnerError::Unsupported("non-Euclidean OMD+ supports linear losses only".into())),
        };
        match geometry.mirror_step(prev, &theta, set.as_ref())? {
            Some(z) => Ok(Action { z, anchor: None }),
            None => Err(LearnerError::Unsupported("no closed-form mirror step for this geometry and set".into())),
        }
    }

    fn ftpl_action(&self, sigma: f64, n: usize, seed: u64) -> Result<Action, LearnerError> {
        if sigma == 0.0 {
            return self.ftl_action();
        }
        let round = self.round() as u64;
        let d = self.domain.dim();
        let mut mean = Vector::zeros(d);
        let mut single_anchor = None;
        for k in 0..n {
            let mut rng = rng_from(derive_seed2(seed, "ftpl", round, k as u64));
            let xi = gaussian_vector(&mut rng, d) * sigma;
            let z = match &self.domain {
                Domain::Gradient(f) => {
                    let (u, a) = if self.a_sum == 0.0 {
                        (self.init_anchor.clone().expect("gradient learners carry an anchor"), 1.0)
                    } else {
                        (&self.x_sum / self.a_sum, self.a_sum)
                    };
                    let p = u - xi / a;
                    let g = f.gradient(&p);
                    if n == 1 {
                        single_anchor = Some(p);
                    }
                    g
                }
                Domain::Set(set) => {
                    let mut agg = self.agg.clone();
                    agg.theta += xi;
                    argmin(&agg, set.as_ref(), &self.current_action)?
                }
            };
            mean += z;
        }
        Ok(Action { z: mean / n as f64, anchor: single_anchor })
    }

    /// Weighted regret against the best fixed action in hindsight.
    pub fn regret_vs_best(&self) -> Result<f64, LearnerError> {
        let cum = self
            .cumulative_weighted_loss
            .ok_or(LearnerError::Unsupported("action losses are not evaluable".into()))?;
        match &self.domain {
            Domain::Gradient(f) => {
                if self.a_sum == 0.0 {
                    return Ok(0.0);
                }
                let xbar = &self.x_sum / self.a_sum;
                Ok(cum + self.a_sum * f.value(&xbar))
            }
            Domain::Set(set) => {
                if self.history.is_empty() {
                    return Ok(0.0);
                }
                let best = argmin(&self.agg, set.as_ref(), &self.current_action)?;
                Ok(cum - self.agg.value(&best))
            }
        }
    }
}

/// `FTL`: minimizer of the weighted cumulative loss so far.
pub fn ftl_step(state: &LearnerState) -> Result<Vector, LearnerError> {
    Ok(state.ftl_action()?.z)
}

/// `OptimisticFTL`: minimizer of the past losses plus `α_t m_t`.
pub fn optimistic_ftl_step(state: &LearnerState, alpha: f64, hint: &LossDescriptor) -> Result<Vector, LearnerError> {
    Ok(state.follow_action(Some((alpha, hint)), None)?.z)
}

/// `FTRL+`: regularized minimizer including the current loss.
pub fn ftrl_plus_step(
    state: &LearnerState,
    alpha: f64,
    current: &LossDescriptor,
    reg: &Regularizer,
    eta: f64,
) -> Result<Vector, LearnerError> {
    if !(eta > 0.0) {
        return Err(LearnerError::NonPositiveStep("eta", eta));
    }
    Ok(state.follow_action(Some((alpha, current)), Some((reg, eta)))?.z)
}

/// `BestResp+`: minimizer of the current loss alone.
pub fn best_resp_step(state: &LearnerState, current: &LossDescriptor) -> Result<Vector, LearnerError> {
    Ok(state.best_resp_action(current)?.z)
}

/// `OMD+`: Bregman-proximal step from the current action.
pub fn omd_plus_step(
    state: &LearnerState,
    alpha: f64,
    current: &LossDescriptor,
    geometry: &BregmanGeometry,
    gamma: f64,
) -> Result<Vector, LearnerError> {
    if !(gamma > 0.0) {
        return Err(LearnerError::NonPositiveStep("gamma", gamma));
    }
    Ok(state.omd_action(alpha, current, geometry, gamma)?.z)
}

/// `FTPL`: Monte-Carlo average of perturbed FTL minimizers.
pub fn ftpl_step(state: &LearnerState, noise_scale: f64, n_samples: usize, seed: u64) -> Result<Vector, LearnerError> {
    if n_samples == 0 {
        return Err(LearnerError::Unsupported("FTPL needs at least one sample".into()));
    }
    Ok(state.ftpl_action(noise_scale, n_samples, seed)?.z)
}

/// `Σ α_t ℓ_t(z_t) - Σ α_t ℓ_t(z*)`.
pub fn weighted_regret(state: &LearnerState, comparator: &Vector) -> Result<f64, LearnerError> {
    let cum = state
        .cumulative_weighted_loss
        .ok_or(LearnerError::Unsupported("action losses are not evaluable".into()))?;
    let mut comp = 0.0;
    match &state.domain {
        Domain::Set(set) => {
            if !set.contains(comparator, 1e-6) {
                return Err(LearnerError::Unsupported("comparator outside the decision set".into()));
            }
            for r in &state.history {
                comp += r.alpha * r.loss.value(comparator).expect("set-domain loss");
            }
        }
        Domain::Gradient(f) => {
            let c = f
                .conjugate(comparator)
                .ok_or(LearnerError::Unsupported("comparator loss needs a closed-form conjugate".into()))?;
            for r in &state.history {
                if let LossDescriptor::FenchelY { x } = &r.loss {
                    comp += r.alpha * (c - x.dot(comparator));
                }
            }
        }
    }
    Ok(cum - comp)
}
