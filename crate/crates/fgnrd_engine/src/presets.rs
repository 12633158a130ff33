use core_oracles::{BregmanGeometry, Psi, WeightSchedule};
use learners::{Regularizer, Strategy, DEFAULT_FTPL_SAMPLES};
use projection_free::{MSchedule, NuclearConfig};
use serde::{Deserialize, Serialize};

use crate::config::{GameConfig, GradientSource, InitRule, Ordering, Payoff};
use crate::error::EngineError;

pub const PRESET_NAMES: [&str; 14] = [
    "frank_wolfe",
    "fw_uniform",
    "fw_linear_rate",
    "smoothed_fw",
    "incremental_fw",
    "nesterov_1mem",
    "nesterov_infmem",
    "nesterov_first",
    "heavy_ball",
    "accel_prox",
    "accel_linear",
    "boundary_fw",
    "gauge_fw",
    "nuclear_norm",
];

/// Constants a preset may need. Unused fields are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetParams {
    /// Smoothness `L`.
    pub smoothness: f64,
    /// Strong convexity `μ` (accel_linear).
    pub mu: f64,
    /// Smoothness of `φ` (accel_linear).
    pub l_phi: f64,
    /// Composite term (accel_prox).
    pub psi: Psi,
    pub x0: Option<Vec<f64>>,
    pub t_max: usize,
    pub seed: u64,
    /// FTPL perturbation scale and sample count (smoothed_fw).
    pub noise_scale: f64,
    pub n_samples: usize,
    pub eta: Option<f64>,
    /// Squared-gauge strong convexity of the set (gauge_fw).
    pub gauge_lambda: Option<f64>,
    pub d1: usize,
    pub d2: usize,
    pub radius: f64,
    pub delta: f64,
}

impl Default for PresetParams {
    fn default() -> Self {
        PresetParams {
            smoothness: 1.0,
            mu: 0.0,
            l_phi: 1.0,
            psi: Psi::Zero,
            x0: None,
            t_max: 100,
            seed: 0,
            noise_scale: 0.1,
            n_samples: DEFAULT_FTPL_SAMPLES,
            eta: None,
            gauge_lambda: None,
            d1: 0,
            d2: 0,
            radius: 1.0,
            delta: 0.1,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Preset {
    Game(GameConfig),
    Nuclear(NuclearConfig),
}

impl Preset {
    pub fn game(self) -> Option<GameConfig> {
        match self {
            Preset::Game(c) => Some(c),
            Preset::Nuclear(_) => None,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<f64, EngineError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(EngineError::config(format!(
            "{name} must be positive and finite (got {v})"
        )))
    }
}

/// `θ = ½√(μ/(L(1+L_φ)))`.
pub fn accel_linear_theta(mu: f64, l: f64, l_phi: f64) -> f64 {
    0.5 * (mu / (l * (1.0 + l_phi))).sqrt()
}

pub fn preset(name: &str, p: &PresetParams) -> Result<Preset, EngineError> {
    let euclid_omd = |l: f64| Strategy::OmdPlus {
        geometry: BregmanGeometry::Euclidean,
        gamma: 1.0 / (4.0 * l),
    };
    let mut cfg = GameConfig::new(
        Strategy::BestResp,
        Strategy::Ftl,
        WeightSchedule::Linear,
        p.t_max,
    );
    cfg.x0 = p.x0.clone();
    match name {
        "frank_wolfe" | "fw_uniform" | "fw_linear_rate" => {
            cfg.weights = match name {
                "frank_wolfe" => WeightSchedule::Linear,
                "fw_uniform" => WeightSchedule::Uniform,
                _ => WeightSchedule::AdaptiveInverseGradSq,
            };
            cfg.init = InitRule::LmoAtCanonical;
        }
        "smoothed_fw" => {
            cfg.y_strategy = Strategy::Ftpl {
                noise_scale: p.noise_scale,
                n_samples: p.n_samples,
                seed: p.seed,
            };
            cfg.weights = WeightSchedule::Uniform;
            cfg.init = InitRule::LmoAtCanonical;
        }
        "incremental_fw" => {
            cfg.weights = WeightSchedule::Uniform;
            cfg.gradient_source = GradientSource::CyclicComponents;
        }
        "nesterov_1mem" | "nesterov_first" => {
            let l = positive("smoothness", p.smoothness)?;
            cfg.y_strategy = Strategy::OptimisticFtl;
            cfg.x_strategy = euclid_omd(l);
        }
        "nesterov_infmem" => {
            let l = positive("smoothness", p.smoothness)?;
            cfg.y_strategy = Strategy::OptimisticFtl;
            let reg = match &p.x0 {
                Some(v0) => Regularizer::HalfSqDist(v0.clone()),
                None => {
                    cfg.init = InitRule::Origin;
                    Regularizer::HalfSqNorm
                }
            };
            cfg.x_strategy = Strategy::FtrlPlus {
                reg,
                eta: 1.0 / (4.0 * l),
            };
        }
        "heavy_ball" => {
            let l = positive("smoothness", p.smoothness)?;
            cfg.x_strategy = euclid_omd(l);
        }
        "accel_prox" => {
            let l = positive("smoothness", p.smoothness)?;
            cfg.payoff = Payoff::Composite { psi: p.psi };
            cfg.y_strategy = Strategy::OptimisticFtl;
            cfg.x_strategy = euclid_omd(l);
        }
        "accel_linear" => {
            let l = positive("smoothness", p.smoothness)?;
            let mu = positive("mu", p.mu)?;
            let l_phi = positive("l_phi", p.l_phi)?;
            if mu > l {
                return Err(EngineError::config("accel_linear needs mu <= L"));
            }
            let theta = accel_linear_theta(mu, l, l_phi);
            let alpha1 = mu / (2.0 * l * (1.0 + l_phi));
            // R = α₀ μ φ with α₀ = 1
            let alpha0 = 1.0;
            cfg.payoff = Payoff::StronglyConvexSplit { mu, l_phi };
            cfg.weights = WeightSchedule::Exponential { theta, alpha1 };
            cfg.y_strategy = Strategy::OptimisticFtl;
            cfg.x_strategy = Strategy::FtrlPlus {
                reg: Regularizer::HalfSqNorm,
                eta: 1.0 / (alpha0 * mu),
            };
            if p.x0.is_none() {
                cfg.init = InitRule::Origin;
            }
        }
        "boundary_fw" => {
            cfg.ordering = Ordering::XFirst;
            cfg.weights = WeightSchedule::Uniform;
            cfg.x_strategy = Strategy::Ftl;
            cfg.y_strategy = Strategy::BestResp;
            cfg.init = InitRule::LmoAtCanonical;
        }
        "gauge_fw" => {
            let l = positive("smoothness", p.smoothness)?;
            let eta = match (p.eta, p.gauge_lambda) {
                (Some(e), _) => positive("eta", e)?,
                (None, Some(lambda)) => positive("gauge_lambda", lambda)? / (4.0 * l),
                (None, None) => {
                    return Err(EngineError::config("gauge_fw needs eta or gauge_lambda"))
                }
            };
            cfg.y_strategy = Strategy::OptimisticFtl;
            cfg.x_strategy = Strategy::FtrlPlus {
                reg: Regularizer::SqGauge,
                eta,
            };
            if p.x0.is_none() {
                cfg.init = InitRule::Origin;
            }
        }
        "nuclear_norm" => {
            if p.d1 == 0 || p.d2 == 0 {
                return Err(EngineError::config("nuclear_norm needs d1, d2 > 0"));
            }
            let mut n =
                NuclearConfig::new(p.d1, p.d2, positive("radius", p.radius)?, p.t_max, p.seed);
            n.eta = p.eta;
            n.delta = p.delta;
            n.m_schedule = MSchedule::Default;
            return Ok(Preset::Nuclear(n));
        }
        _ => {
            return Err(EngineError::UnknownPreset {
                name: name.to_string(),
                valid: PRESET_NAMES.iter().map(|s| s.to_string()).collect(),
            })
        }
    }
    Ok(Preset::Game(cfg))
}
