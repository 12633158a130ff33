use core_oracles::{ObjectiveOracle, Trace, TraceRow, Vector};

use crate::config::{HbVersion, MomentumConfig};
use crate::error::MomentumError;

/// Heavy-ball state: current and previous iterate, plus the momentum buffer
/// for [`HbVersion::Hb1`].
#[derive(Debug, Clone)]
pub struct HeavyBall {
    eta: f64,
    beta: f64,
    version: HbVersion,
    w: Vector,
    w_prev: Vector,
    buffer: Vector,
    t: usize,
}

impl HeavyBall {
    pub fn new(cfg: &MomentumConfig, version: HbVersion) -> Result<Self, MomentumError> {
        cfg.validate()?;
        Ok(HeavyBall {
            eta: cfg.eta,
            beta: cfg.beta,
            version,
            w: cfg.w0.clone(),
            w_prev: cfg.w0.clone(),
            buffer: Vector::zeros(cfg.w0.len()),
            t: 0,
        })
    }

    pub fn w(&self) -> &Vector {
        &self.w
    }

    pub fn w_prev(&self) -> &Vector {
        &self.w_prev
    }

    /// Number of steps taken so far.
    pub fn iteration(&self) -> usize {
        self.t
    }

    /// Multiplies `w`, `w_prev` and the buffer by `2^k`. Exact in floating
    /// point, and the trajectory is unchanged when the gradient is linear
    /// through the origin.
    pub fn rescale_pow2(&mut self, k: i32) {
        let f = 2f64.powi(k);
        self.w *= f;
        self.w_prev *= f;
        self.buffer *= f;
    }

    /// One update with the gradient at the current iterate.
    pub fn step(&mut self, grad: &Vector) -> Result<(), MomentumError> {
        if grad.len() != self.w.len() {
            return Err(MomentumError::Shape(format!("gradient has length {}, iterate {}", grad.len(), self.w.len())));
        }
        let next = match self.version {
            HbVersion::Hb1 => {
                self.buffer = &self.buffer * self.beta + grad;
                &self.w - &self.buffer * self.eta
            }
            HbVersion::Hb2 => &self.w - grad * self.eta + (&self.w - &self.w_prev) * self.beta,
        };
        if next.iter().any(|v| !v.is_finite()) {
            return Err(MomentumError::NonFinite { iteration: self.t + 1 });
        }
        self.w_prev = std::mem::replace(&mut self.w, next);
        self.t += 1;
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct HeavyBallRun {
    pub w_final: Vector,
    /// `w_0, …, w_T`.
    pub iterates: Vec<Vector>,
    pub trace: Trace,
}

fn stacked(a: &Vector, b: &Vector, w_star: &Vector) -> f64 {
    ((a - w_star).norm_squared() + (b - w_star).norm_squared()).sqrt()
}

/// Runs `t_max` steps. Rows `t = 0..=T` hold `f(w_t)`, `‖∇f(w_t)‖` and, with
/// `w*`, the stacked residual `‖(w_t − w*, w_{t−1} − w*)‖` in `dist`.
pub fn heavy_ball_run(
    cfg: &MomentumConfig,
    f: &dyn ObjectiveOracle,
    t_max: usize,
    w_star: Option<&Vector>,
    version: HbVersion,
) -> Result<HeavyBallRun, MomentumError> {
    if cfg.w0.len() != f.dim() {
        return Err(MomentumError::Shape(format!("start has length {}, objective dimension {}", cfg.w0.len(), f.dim())));
    }
    if let Some(ws) = w_star {
        if ws.len() != f.dim() {
            return Err(MomentumError::Shape("reference minimizer has the wrong length".into()));
        }
    }
    let mut hb = HeavyBall::new(cfg, version)?;
    let mut trace = Trace::new(&["residual"]);
    let mut iterates = Vec::with_capacity(t_max + 1);
    loop {
        let t = hb.iteration();
        let g = f.gradient(hb.w());
        let row = TraceRow::new(t as u64, f.value(hb.w()), g.norm())
            .with_dist(w_star.map(|ws| stacked(hb.w(), hb.w_prev(), ws)))
            .with_extras(vec![w_star.map(|ws| (hb.w() - ws).norm())]);
        trace.push(row);
        iterates.push(hb.w().clone());
        if t == t_max {
            break;
        }
        hb.step(&g)?;
    }
    Ok(HeavyBallRun { w_final: hb.w().clone(), iterates, trace })
}
