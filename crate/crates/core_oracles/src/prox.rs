//! Composite terms and their proximal maps.

use serde::{Deserialize, Serialize};

use crate::linalg::Vector;

/// Soft-thresholding: `sign(v_i) max(|v_i| - λ, 0)`.
pub fn prox_l1(v: &Vector, lam: f64) -> Vector {
    v.map(|x| {
        let m = (x.abs() - lam).max(0.0);
        if m == 0.0 {
            0.0
        } else {
            x.signum() * m
        }
    })
}

/// Simple convex regularizers `ψ` that admit closed-form proximal maps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Psi {
    Zero,
    /// `c ‖x‖₁`
    L1(f64),
    /// `(μ/2) ‖x‖²`
    HalfSq(f64),
}

impl Psi {
    pub fn value(&self, x: &Vector) -> f64 {
        match *self {
            Psi::Zero => 0.0,
            Psi::L1(c) => c * x.lp_norm(1),
            Psi::HalfSq(mu) => 0.5 * mu * x.norm_squared(),
        }
    }

    /// `argmin_x ψ(x) + (1/2λ)‖x - v‖²` over R^d.
    pub fn prox(&self, v: &Vector, lam: f64) -> Vector {
        match *self {
            Psi::Zero => v.clone(),
            Psi::L1(c) => prox_l1(v, lam * c),
            Psi::HalfSq(mu) => v / (1.0 + lam * mu),
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            Psi::Zero => true,
            Psi::L1(c) | Psi::HalfSq(c) => c == 0.0,
        }
    }

    /// Same term scaled by a nonnegative factor.
    pub fn scaled(&self, s: f64) -> Psi {
        match *self {
            Psi::Zero => Psi::Zero,
            Psi::L1(c) => Psi::L1(c * s),
            Psi::HalfSq(mu) => Psi::HalfSq(mu * s),
        }
    }
}
