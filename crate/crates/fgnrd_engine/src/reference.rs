//! Classical iterative forms of the methods the presets reproduce.

use core_oracles::{FeasibleSet, ObjectiveOracle, Trace, TraceRow, Vector};

use crate::error::EngineError;
use crate::presets::PresetParams;

pub const REFERENCE_NAMES: [&str; 6] = [
    "frank_wolfe",
    "nesterov_1mem",
    "nesterov_infmem",
    "nesterov_first",
    "heavy_ball",
    "accel_prox",
];

#[derive(Debug, Clone)]
pub struct ReferenceRun {
    /// `w_1, …, w_T`.
    pub iterates: Vec<Vector>,
    /// `f_value` is `f(w_t)` (plus `ψ(w_t)` for accel_prox).
    pub trace: Trace,
}

fn project(set: &dyn FeasibleSet, v: &Vector) -> Result<Vector, EngineError> {
    set.project(v).ok_or_else(|| {
        EngineError::config("reference method needs a Euclidean projection onto the set")
    })
}

pub fn reference_iterative(
    name: &str,
    p: &PresetParams,
    f: &dyn ObjectiveOracle,
    set: &dyn FeasibleSet,
    t_max: usize,
    x0: &Vector,
) -> Result<ReferenceRun, EngineError> {
    if !REFERENCE_NAMES.contains(&name) {
        return Err(EngineError::UnknownPreset {
            name: name.to_string(),
            valid: REFERENCE_NAMES.iter().map(|s| s.to_string()).collect(),
        });
    }
    if x0.len() != set.dim() || f.dim() != set.dim() {
        return Err(EngineError::config(
            "dimension mismatch between x0, f and the set",
        ));
    }
    let l = p.smoothness;
    if name != "frank_wolfe" && !(l > 0.0 && l.is_finite()) {
        return Err(EngineError::config(
            "reference method needs a positive smoothness",
        ));
    }
    let mut iterates = Vec::with_capacity(t_max);
    match name {
        "frank_wolfe" => {
            let mut w = x0.clone();
            for t in 1..=t_max {
                let gamma = 2.0 / (t as f64 + 1.0);
                let v = core_oracles::lmo(set, &f.gradient(&w))?;
                w = &w * (1.0 - gamma) + v * gamma;
                iterates.push(w.clone());
            }
        }
        "nesterov_1mem" | "nesterov_infmem" | "accel_prox" => {
            let (mut w, mut v) = (x0.clone(), x0.clone());
            let mut grad_sum = Vector::zeros(x0.len());
            for t in 1..=t_max {
                let beta = 2.0 / (t as f64 + 1.0);
                let gamma_t = t as f64 / (4.0 * l);
                let z = &w * (1.0 - beta) + &v * beta;
                let g = f.gradient(&z);
                v = match name {
                    "nesterov_1mem" => project(set, &(&v - &g * gamma_t))?,
                    "nesterov_infmem" => {
                        grad_sum.axpy(gamma_t, &g, 1.0);
                        project(set, &(x0 - &grad_sum))?
                    }
                    _ => p.psi.prox(&(&v - &g * gamma_t), gamma_t),
                };
                w = &w * (1.0 - beta) + &v * beta;
                iterates.push(w.clone());
            }
        }
        "nesterov_first" => {
            let mut z = x0.clone();
            let mut w_prev = x0.clone();
            for t in 1..=t_max {
                let tf = t as f64;
                let theta = tf / (2.0 * (tf + 1.0) * l);
                let beta = (tf - 1.0) / (tf + 2.0);
                let w = &z - f.gradient(&z) * theta;
                z = &w + (&w - &w_prev) * beta;
                iterates.push(w.clone());
                w_prev = w;
            }
        }
        "heavy_ball" => {
            // x̄_t = x̄_{t−1} − (γα_t²/A_t)∇f(x̄_{t−1}) + (α_t A_{t−2}/(A_t α_{t−1}))(x̄_{t−1} − x̄_{t−2})
            // with α_t = t, γ = 1/(4L): step t/(2(t+1)L), momentum (t−2)/(t+1)
            let (mut w1, mut w2) = (x0.clone(), x0.clone());
            for t in 1..=t_max {
                let tf = t as f64;
                let eta = tf / (2.0 * (tf + 1.0) * l);
                let mom = if t >= 2 { (tf - 2.0) / (tf + 1.0) } else { 0.0 };
                let w = &w1 - f.gradient(&w1) * eta + (&w1 - &w2) * mom;
                iterates.push(w.clone());
                w2 = std::mem::replace(&mut w1, w);
            }
        }
        _ => unreachable!(),
    }
    let mut trace = Trace::new(&[]);
    for (i, w) in iterates.iter().enumerate() {
        let mut val = f.value(w);
        if name == "accel_prox" {
            val += p.psi.value(w);
        }
        trace.push(TraceRow::new(i as u64 + 1, val, f.gradient(w).norm()));
    }
    Ok(ReferenceRun { iterates, trace })
}
