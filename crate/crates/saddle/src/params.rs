//! The theorem's parameter choices, for display only. Their absolute
//! constants give steps far too small to run at desk scale.

/// Problem constants entering the parameter table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryConstants {
    pub eps: f64,
    pub delta: f64,
    pub gamma: f64,
    pub l: f64,
    pub c_m: f64,
    pub sigma2: f64,
    pub rho: f64,
    pub c_prime: f64,
    pub c_h: f64,
    pub beta: f64,
    /// The unspecified constant in the period lower bound.
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryParameters {
    pub r: f64,
    pub eta: f64,
    pub f_thred: f64,
    pub t_thred: f64,
}

pub const C0: f64 = 1.0 / 1152.0;

/// Largest admissible constants: `r = δγε²c_r`, `η = δ²γ²ε⁵c_η`,
/// `F = δγ²ε⁴c_F` and the lower bound on the period.
pub fn theory_parameters(k: &TheoryConstants) -> TheoryParameters {
    let c_r = C0 / (k.c_m.powi(3) * k.rho * k.l * k.sigma2 * k.c_h);
    let c_eta = (C0 / 24.0) / (k.c_m.powi(5) * k.rho * k.l * k.l * k.sigma2 * k.c_prime * k.c_h);
    let c_f = (C0 / 576.0) / (k.c_m.powi(4) * k.rho * k.rho * k.l * k.sigma2 * k.sigma2 * k.c_h);
    let r = k.delta * k.gamma * k.eps * k.eps * c_r;
    let eta = k.delta.powi(2) * k.gamma.powi(2) * k.eps.powi(5) * c_eta;
    let f_thred = k.delta * k.gamma.powi(2) * k.eps.powi(4) * c_f;
    let one_b = 1.0 - k.beta;
    let log_arg = k.l * k.c_m * k.sigma2 * k.rho * k.c_prime * k.c_h / (one_b * k.delta * k.gamma * k.eps);
    let t_thred = (k.c * one_b / (eta * k.eps) * log_arg.ln()).max(1.0 + 2.0 * k.beta / one_b);
    TheoryParameters { r, eta, f_thred, t_thred }
}
