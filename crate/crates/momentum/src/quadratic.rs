use core_oracles::random::{gaussian_vector, spd_with_spectrum};
use core_oracles::seed::{derive_seed, rng_from};
use core_oracles::{ObjectiveOracle, Quadratic, Trace, TraceRow, Vector};

use crate::config::{HbVersion, MomentumConfig};
use crate::error::MomentumError;
use crate::hb::HeavyBall;
use crate::tuned::{tuned_params, ProblemKind};

/// `½(w − w*)ᵀΓ(w − w*)` with spectrum `[1, κ]` and a Gaussian start offset.
#[derive(Debug, Clone)]
pub struct QuadraticInstance {
    pub f: Quadratic,
    pub w_star: Vector,
    pub w0: Vector,
    pub kappa: f64,
}

pub fn quadratic_instance(kappa: f64, d: usize, seed: u64) -> Result<QuadraticInstance, MomentumError> {
    if !(kappa >= 1.0) {
        return Err(MomentumError::KappaBelowOne(kappa));
    }
    if d < 2 {
        return Err(MomentumError::InvalidConfig("dimension must be at least 2".into()));
    }
    let mut rng = rng_from(derive_seed(seed, "momentum_quadratic", 0));
    let gamma = spd_with_spectrum(&mut rng, d, 1.0, kappa);
    let w_star = gaussian_vector(&mut rng, d);
    let w0 = &w_star + gaussian_vector(&mut rng, d);
    let f = Quadratic::centered(gamma, &w_star).map_err(|e| MomentumError::InvalidConfig(e.to_string()))?;
    Ok(QuadraticInstance { f, w_star, w0, kappa })
}

#[derive(Debug, Clone)]
pub struct BoundCheck {
    /// `max_t ‖(ξ_t, ξ_{t−1})‖ / ((1 − 1/(2√κ))ᵗ 4√κ ‖(ξ_0, ξ_{−1})‖)`.
    pub max_ratio: f64,
    pub worst_t: usize,
    /// Extras `log10_residual` and `ratio` per `t`.
    pub trace: Trace,
}

/// Rescaling threshold for the residual state.
const RESCALE_BELOW: f64 = 1e-150;
const RESCALE_POW: i32 = 498;

/// Tuned heavy ball on [`quadratic_instance`], comparing the stacked residual
/// with `(1 − 1/(2√κ))ᵗ · 4√κ · initial` for every `t ≤ t_max`.
///
/// The run is carried out on the residual `ξ = w − w*` of the translated
/// problem `½ξᵀΓξ`, whose heavy-ball recursion is linear and homogeneous.
/// The state is rescaled by powers of two when it gets small, so residuals
/// far below the double-precision range are tracked exactly.
pub fn quadratic_bound_check(kappa: f64, d: usize, t_max: usize, seed: u64) -> Result<BoundCheck, MomentumError> {
    let inst = quadratic_instance(kappa, d, seed)?;
    let p = tuned_params(ProblemKind::Quadratic { lambda_min: 1.0, lambda_max: kappa })?;
    let xi0 = &inst.w0 - &inst.w_star;
    let mut hb = HeavyBall::new(&p.config(xi0.clone())?, HbVersion::Hb2)?;
    let gamma = inst.f.gamma();
    let ln2 = std::f64::consts::LN_2;
    let ln_rate = (1.0 - 1.0 / (2.0 * kappa.sqrt())).ln();
    let ln_c = (4.0 * kappa.sqrt() * 2f64.sqrt() * xi0.norm()).ln();
    let mut exponent: i64 = 0;
    let mut trace = Trace::new(&["log10_residual", "ratio"]);
    let (mut max_ratio, mut worst_t) = (0.0f64, 0);
    for t in 0..=t_max {
        let stacked = (hb.w().norm_squared() + hb.w_prev().norm_squared()).sqrt();
        let ln_res = stacked.ln() + exponent as f64 * ln2;
        let ratio = (ln_res - (t as f64 * ln_rate + ln_c)).exp();
        if ratio > max_ratio {
            max_ratio = ratio;
            worst_t = t;
        }
        let g = gamma * hb.w();
        trace.push(
            TraceRow::new(t as u64, 0.5 * hb.w().dot(&g), g.norm())
                .with_extras(vec![Some(ln_res / std::f64::consts::LN_10), Some(ratio)]),
        );
        if t == t_max {
            break;
        }
        hb.step(&g)?;
        if hb.w().amax().max(hb.w_prev().amax()) < RESCALE_BELOW {
            hb.rescale_pow2(RESCALE_POW);
            exponent -= RESCALE_POW as i64;
        }
    }
    Ok(BoundCheck { max_ratio, worst_t, trace })
}

/// First `t` with `‖w_t − w*‖ ≤ tol · ‖w_0 − w*‖`, or `None` within `t_cap`.
pub fn iterations_to_residual(
    cfg: &MomentumConfig,
    f: &dyn ObjectiveOracle,
    w_star: &Vector,
    tol: f64,
    t_cap: usize,
) -> Result<Option<usize>, MomentumError> {
    let target = tol * (&cfg.w0 - w_star).norm();
    let mut hb = HeavyBall::new(cfg, HbVersion::Hb2)?;
    for t in 0..=t_cap {
        if (hb.w() - w_star).norm() <= target {
            return Ok(Some(t));
        }
        let g = f.gradient(hb.w());
        hb.step(&g)?;
    }
    Ok(None)
}
