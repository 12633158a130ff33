//! Empirical checks of the alignment properties along a run.

use core_oracles::linalg::sym_eigen_sorted;
use core_oracles::{Matrix, ObjectiveOracle, Vector};

use crate::config::SaddleConfig;
use crate::error::SaddleError;
use crate::run::{cnc_sgd_observe, StepView};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsSettings {
    /// Gradient-norm / curvature threshold separating the regimes.
    pub eps: f64,
    /// Length of the product defining `M_t`.
    pub tau: u64,
    /// Start index of the second product, `1 ≤ k ≤ tau − 1`.
    pub k: u64,
}

impl DiagnosticsSettings {
    pub fn new(eps: f64, tau: u64) -> Self {
        DiagnosticsSettings { eps, tau, k: 1 }
    }

    fn validate(&self) -> Result<(), SaddleError> {
        if !(self.eps > 0.0) || self.tau < 2 || self.k < 1 || self.k >= self.tau {
            return Err(SaddleError::InvalidConfig(format!(
                "diagnostics need eps > 0, tau ≥ 2 and 1 ≤ k < tau (eps = {}, tau = {}, k = {})",
                self.eps, self.tau, self.k
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRow {
    pub t: u64,
    pub grad_norm: f64,
    pub lambda_min: f64,
    /// `⟨∇f, m_t − g_t⟩ / ‖∇f‖²`, present when `‖∇f‖ ≥ eps`.
    pub apag_ratio: Option<f64>,
    /// `⟨∇f, M_t m_t⟩ / (η σ_max(M_t) ‖∇f‖²)`, present when `‖∇f‖ ≤ eps`,
    /// `λ_min ≤ −eps` and every `G_{s,t}` is PSD.
    pub apcg_ratio: Option<f64>,
    /// The APCG regime applied but some `G_{s,t}` was not PSD.
    pub apcg_suppressed: bool,
    /// `(η⟨∇f, g_t − m_t⟩ + (η²/2) m_tᵀ∇²f m_t) / η²`.
    pub grace_value: f64,
    /// `⟨m_t, v_t⟩²` with `v_t` the unit eigenvector of `λ_min`.
    pub cnc_proxy: f64,
}

/// `η(1 − βˢ)/(1 − β)`, the curvature coefficient of `G_{s,t}`.
pub fn g_coefficient(eta: f64, beta: f64, s: u64) -> f64 {
    if beta == 0.0 {
        eta
    } else {
        eta * (1.0 - beta.powi(s as i32)) / (1.0 - beta)
    }
}

/// Every `G_{s,t} = I − c_s ∇²f` with `s < tau` is PSD iff
/// `c_{tau−1} λ_max ≤ 1` (the coefficients increase with `s`).
pub fn g_products_psd(lambda_max: f64, eta: f64, beta: f64, tau: u64) -> bool {
    g_coefficient(eta, beta, tau - 1) * lambda_max <= 1.0
}

/// Log of the `M_t` eigenvalue for a Hessian eigenvalue `lambda`:
/// `Σ_{s=1}^{τ−1} ln(1 − c_s λ) + Σ_{s=k}^{τ−1} ln(1 − c_s λ)`.
pub fn log_m_eigenvalue(lambda: f64, eta: f64, beta: f64, tau: u64, k: u64) -> f64 {
    let mut acc = 0.0;
    for s in 1..tau {
        let l = (1.0 - g_coefficient(eta, beta, s) * lambda).ln();
        acc += if s >= k { 2.0 * l } else { l };
    }
    acc
}

/// `M_t` through the eigendecomposition of the Hessian.
pub fn apcg_matrix(hess: &Matrix, eta: f64, beta: f64, tau: u64, k: u64) -> Matrix {
    let (vals, vecs) = sym_eigen_sorted(hess);
    let p = vals.map(|l| log_m_eigenvalue(l, eta, beta, tau, k).exp());
    &vecs * Matrix::from_diagonal(&p) * vecs.transpose()
}

/// `M_t` as the literal matrix product.
pub fn apcg_matrix_explicit(hess: &Matrix, eta: f64, beta: f64, tau: u64, k: u64) -> Matrix {
    let n = hess.nrows();
    let g = |s: u64| Matrix::identity(n, n) - hess * g_coefficient(eta, beta, s);
    let mut left = Matrix::identity(n, n);
    for s in 1..tau {
        left *= g(s);
    }
    let mut right = Matrix::identity(n, n);
    for s in k..tau {
        right *= g(s);
    }
    left * right
}

/// Unit eigenvector of the smallest eigenvalue, first nonzero entry positive.
pub fn min_eigenvector(hess: &Matrix) -> (f64, Vector) {
    let (vals, vecs) = sym_eigen_sorted(hess);
    let mut v: Vector = vecs.column(0).into();
    if let Some(first) = v.iter().find(|x| **x != 0.0) {
        if *first < 0.0 {
            v = -v;
        }
    }
    (vals[0], v)
}

/// Diagnostics at one step of a run with base step `eta` and momentum `beta`.
pub fn diagnose(
    obj: &dyn ObjectiveOracle,
    eta: f64,
    beta: f64,
    settings: &DiagnosticsSettings,
    view: &StepView,
) -> Result<DiagnosticsRow, SaddleError> {
    settings.validate()?;
    let grad = obj.gradient(view.w);
    let hess = obj.hessian(view.w).ok_or(SaddleError::NoHessian)?;
    let (vals, vecs) = sym_eigen_sorted(&hess);
    let lambda_min = vals[0];
    let lambda_max = vals[vals.len() - 1];
    let gn = grad.norm();
    let gn2 = gn * gn;
    let diff = view.m - view.g;

    let apag_ratio = (gn >= settings.eps && gn2 > 0.0).then(|| grad.dot(&diff) / gn2);

    let in_apcg = gn <= settings.eps && lambda_min <= -settings.eps;
    let psd = g_products_psd(lambda_max, eta, beta, settings.tau);
    let apcg_ratio = if in_apcg && psd && gn2 > 0.0 {
        let logs: Vec<f64> = vals.iter().map(|&l| log_m_eigenvalue(l, eta, beta, settings.tau, settings.k)).collect();
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut num = 0.0;
        for (i, lp) in logs.iter().enumerate() {
            let u = vecs.column(i);
            num += (lp - top).exp() * u.dot(&grad) * u.dot(view.m);
        }
        Some(num / (eta * gn2))
    } else {
        None
    };

    let (_, v) = min_eigenvector(&hess);
    let grace_value = -grad.dot(&diff) / eta + 0.5 * view.m.dot(&(&hess * view.m));
    Ok(DiagnosticsRow {
        t: view.t,
        grad_norm: gn,
        lambda_min,
        apag_ratio,
        apcg_ratio,
        apcg_suppressed: in_apcg && !psd,
        grace_value,
        cnc_proxy: v.dot(view.m).powi(2),
    })
}

/// Runs `cfg` and evaluates [`diagnose`] at every `every`-th step.
pub fn cnc_sgd_diagnostics(
    obj: &dyn ObjectiveOracle,
    cfg: &SaddleConfig,
    settings: &DiagnosticsSettings,
    every: u64,
) -> Result<Vec<DiagnosticsRow>, SaddleError> {
    settings.validate()?;
    if every == 0 {
        return Err(SaddleError::InvalidConfig("every must be positive".into()));
    }
    let mut rows = Vec::new();
    let mut err = None;
    cnc_sgd_observe(obj, cfg, |v| {
        if v.t % every != 0 {
            return true;
        }
        match diagnose(obj, cfg.eta, cfg.beta, settings, v) {
            Ok(r) => {
                rows.push(r);
                true
            }
            Err(e) => {
                err = Some(e);
                false
            }
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(rows),
    }
}
