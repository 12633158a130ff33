use core_oracles::seed::derive_seed;
use core_oracles::{ObjectiveOracle, Trace, TraceRow, Vector};
use rayon::prelude::*;

use crate::config::SaddleConfig;
use crate::error::SaddleError;

/// Per-iterate metric recorded in the `dist` column.
pub type Metric<'a> = &'a (dyn Fn(&Vector) -> f64 + Sync);

/// What the observer sees at step `t`: the iterate `w_t`, the stochastic
/// gradient `g_t`, the momentum `m_t = βm_{t−1} + g_t` and the step used.
pub struct StepView<'a> {
    pub t: u64,
    pub w: &'a Vector,
    pub g: &'a Vector,
    pub m: &'a Vector,
    pub step: f64,
    pub boosted: bool,
}

#[derive(Debug, Clone)]
pub struct SaddleRun {
    pub w_final: Vector,
    pub trace: Trace,
    pub boosted_steps: u64,
}

/// Sub-seed for the stochastic gradient at step `t`.
pub fn step_seed(root: u64, t: u64) -> u64 {
    derive_seed(root, "cnc_sgd", t)
}

/// Runs steps `t = 0..=t_max`, calling `observe` before each update.
/// Returning `false` stops the run; the returned iterate is the last one
/// reached. Returns `(w, steps taken, boosted steps)`.
pub fn cnc_sgd_observe<F>(obj: &dyn ObjectiveOracle, cfg: &SaddleConfig, mut observe: F) -> Result<(Vector, u64, u64), SaddleError>
where
    F: FnMut(&StepView) -> bool,
{
    cfg.validate()?;
    if cfg.w0.len() != obj.dim() {
        return Err(SaddleError::Shape(format!("w0 has length {}, objective dimension {}", cfg.w0.len(), obj.dim())));
    }
    let mut w = cfg.w0.clone();
    let mut m = Vector::zeros(w.len());
    let mut boosted = 0;
    for t in 0..=cfg.t_max {
        let g = obj.stochastic_gradient(&w, step_seed(cfg.seed, t)).ok_or(SaddleError::NoStochasticGradient)?;
        m *= cfg.beta;
        m += &g;
        let is_boost = cfg.is_boosted(t);
        let step = cfg.step_size(t);
        let view = StepView { t, w: &w, g: &g, m: &m, step, boosted: is_boost };
        if !observe(&view) {
            return Ok((w, t, boosted));
        }
        if is_boost {
            boosted += 1;
        }
        w.axpy(-step, &m, 1.0);
        if w.iter().any(|v| !v.is_finite()) {
            return Err(SaddleError::NonFinite { iteration: t + 1 });
        }
    }
    Ok((w, cfg.t_max + 1, boosted))
}

/// Full run with a trace of `f(w_t)`, `‖∇f(w_t)‖`, the optional metric in
/// `dist` and a `boost` marker (1 on boosted steps). Rows cover
/// `t = 0..=t_max + 1`, thinned by `record_every`.
pub fn cnc_sgd_run(obj: &dyn ObjectiveOracle, cfg: &SaddleConfig, metric: Option<Metric>) -> Result<SaddleRun, SaddleError> {
    let mut trace = Trace::new(&["boost"]);
    trace.meta.seed = Some(cfg.seed);
    let row = |t: u64, w: &Vector, boost: Option<f64>| {
        TraceRow::new(t, obj.value(w), obj.gradient(w).norm())
            .with_dist(metric.map(|f| f(w)))
            .with_extras(vec![boost])
    };
    let (w_final, steps, boosted_steps) = cnc_sgd_observe(obj, cfg, |v| {
        if v.t % cfg.record_every == 0 {
            trace.push(row(v.t, v.w, Some(if v.boosted { 1.0 } else { 0.0 })));
        }
        true
    })?;
    trace.push(row(steps, &w_final, None));
    Ok(SaddleRun { w_final, trace, boosted_steps })
}

/// First `t` with `hit(w_t)`, checking every iterate up to `w_{t_max+1}`.
pub fn first_hit<F>(obj: &dyn ObjectiveOracle, cfg: &SaddleConfig, hit: F) -> Result<Option<u64>, SaddleError>
where
    F: Fn(&Vector) -> bool,
{
    let mut found = None;
    let (w, steps, _) = cnc_sgd_observe(obj, cfg, |v| {
        if hit(v.w) {
            found = Some(v.t);
            false
        } else {
            true
        }
    })?;
    if found.is_none() && hit(&w) {
        found = Some(steps);
    }
    Ok(found)
}

/// First `t` with `f(w_t) ≤ threshold`.
pub fn escape_time(obj: &dyn ObjectiveOracle, cfg: &SaddleConfig, threshold: f64) -> Result<Option<u64>, SaddleError> {
    first_hit(obj, cfg, |w| obj.value(w) <= threshold)
}

/// Seed of the `i`-th run in a sweep.
pub fn sweep_seed(root: u64, i: usize) -> u64 {
    derive_seed(root, "beta_sweep", i as u64)
}

/// Runs one configuration per β in parallel. Run `i` uses
/// [`sweep_seed`]`(cfg.seed, i)`; results come back in input order.
pub fn beta_sweep(
    obj: &dyn ObjectiveOracle,
    cfg: &SaddleConfig,
    betas: &[f64],
    metric: Option<Metric>,
) -> Result<Vec<(f64, SaddleRun)>, SaddleError> {
    betas
        .par_iter()
        .enumerate()
        .map(|(i, &beta)| {
            let c = SaddleConfig { beta, seed: sweep_seed(cfg.seed, i), ..cfg.clone() };
            cnc_sgd_run(obj, &c, metric).map(|r| (beta, r))
        })
        .collect()
}
