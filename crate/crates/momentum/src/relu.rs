use core_oracles::random::{gaussian_matrix, unit_sphere};
use core_oracles::seed::{derive_seed, rng_from};
use core_oracles::{Matrix, Trace, TraceRow, Vector};
use rand::Rng;

use crate::config::{HbVersion, MomentumConfig};
use crate::error::MomentumError;
use crate::hb::HeavyBall;

/// `N_W(x) = (1/√m) Σ_r a_r σ(⟨w⁽ʳ⁾, x⟩)` with `σ(z) = z·1{z ≥ 0}`. Only the
/// first layer `W` (row `r` is `w⁽ʳ⁾`) is trained.
#[derive(Debug, Clone)]
pub struct ReluNet {
    pub w: Matrix,
    pub a: Vector,
    /// Row `i` is the sample `x_i`.
    pub x: Matrix,
    pub y: Vector,
}

fn active(z: f64) -> f64 {
    if z >= 0.0 {
        1.0
    } else {
        0.0
    }
}

impl ReluNet {
    pub fn new(w: Matrix, a: Vector, x: Matrix, y: Vector) -> Result<Self, MomentumError> {
        if a.len() != w.nrows() || x.ncols() != w.ncols() || y.len() != x.nrows() {
            return Err(MomentumError::Shape(format!(
                "W {}×{}, a {}, X {}×{}, y {}",
                w.nrows(),
                w.ncols(),
                a.len(),
                x.nrows(),
                x.ncols(),
                y.len()
            )));
        }
        if a.iter().any(|v| v.abs() != 1.0) {
            return Err(MomentumError::InvalidConfig("output signs must be ±1".into()));
        }
        if let Some(i) = (0..x.nrows()).find(|&i| x.row(i).norm() > 1.0 + 1e-12) {
            return Err(MomentumError::InvalidConfig(format!("sample {i} has norm above 1")));
        }
        Ok(ReluNet { w, a, x, y })
    }

    /// Unit-norm Gaussian inputs, uniform ±1 labels, `w⁽ʳ⁾ ∼ N(0, I_d)` and
    /// Rademacher output signs.
    pub fn random(n: usize, m: usize, d: usize, seed: u64) -> Self {
        let mut data = rng_from(derive_seed(seed, "relu_data", 0));
        let mut x = Matrix::zeros(n, d);
        for i in 0..n {
            x.set_row(i, &unit_sphere(&mut data, d).transpose());
        }
        let y = Vector::from_iterator(n, (0..n).map(|_| if data.random_bool(0.5) { 1.0 } else { -1.0 }));
        let mut init = rng_from(derive_seed(seed, "relu_init", 0));
        let w = gaussian_matrix(&mut init, m, d);
        let a = Vector::from_iterator(m, (0..m).map(|_| if init.random_bool(0.5) { 1.0 } else { -1.0 }));
        ReluNet { w, a, x, y }
    }

    pub fn width(&self) -> usize {
        self.w.nrows()
    }

    /// `m × n` pre-activations `⟨w⁽ʳ⁾, x_i⟩`.
    fn pre(&self, w: &Matrix) -> Matrix {
        w * self.x.transpose()
    }

    /// `u_i = N_W(x_i)`.
    pub fn outputs(&self, w: &Matrix) -> Vector {
        let pre = self.pre(w);
        let scale = 1.0 / (self.width() as f64).sqrt();
        Vector::from_iterator(
            self.x.nrows(),
            (0..self.x.nrows()).map(|i| scale * (0..self.width()).map(|r| self.a[r] * pre[(r, i)].max(0.0)).sum::<f64>()),
        )
    }

    /// `½ Σ (y_i − N_W(x_i))²`.
    pub fn loss(&self, w: &Matrix) -> f64 {
        0.5 * (self.outputs(w) - &self.y).norm_squared()
    }

    /// Subgradient `(1/√m) Σ_i (N(x_i) − y_i) a_r 1{⟨w⁽ʳ⁾, x_i⟩ ≥ 0} x_i` per row.
    pub fn gradient(&self, w: &Matrix) -> Matrix {
        let pre = self.pre(w);
        let xi = self.outputs(w) - &self.y;
        let scale = 1.0 / (self.width() as f64).sqrt();
        let coef = Matrix::from_fn(self.width(), self.x.nrows(), |r, i| scale * self.a[r] * active(pre[(r, i)]) * xi[i]);
        coef * &self.x
    }

    /// Fraction of the `mn` activation indicators that differ between `w0` and `w`.
    pub fn pattern_change(&self, w0: &Matrix, w: &Matrix) -> f64 {
        let (p0, p) = (self.pre(w0), self.pre(w));
        let changed = p0.iter().zip(p.iter()).filter(|(a, b)| active(**a) != active(**b)).count();
        changed as f64 / p0.len() as f64
    }
}

/// `H(W)_{ij} = (x_iᵀx_j/m) Σ_r 1{⟨w⁽ʳ⁾, x_i⟩ ≥ 0 and ⟨w⁽ʳ⁾, x_j⟩ ≥ 0}`.
pub fn relu_gram(net: &ReluNet, w: &Matrix) -> Matrix {
    let s = net.pre(w).map(active);
    let counts = s.transpose() * &s;
    let inner = &net.x * net.x.transpose();
    inner.component_mul(&counts) / net.width() as f64
}

#[derive(Debug, Clone)]
pub struct ReluRun {
    pub w_final: Matrix,
    /// `f_value` is the loss, `dist` the stacked residual `‖(ξ_t, ξ_{t−1})‖`;
    /// extras `residual` (`‖ξ_t‖`) and `pattern_change`.
    pub trace: Trace,
}

fn flatten(m: &Matrix) -> Vector {
    Vector::from_column_slice(m.as_slice())
}

/// Heavy ball on the first layer from `net.w`, `t_max` steps.
pub fn relu_train(net: &ReluNet, eta: f64, beta: f64, t_max: usize) -> Result<ReluRun, MomentumError> {
    let (m, d) = net.w.shape();
    let cfg = MomentumConfig::new(eta, beta, flatten(&net.w))?;
    let mut hb = HeavyBall::new(&cfg, HbVersion::Hb2)?;
    let mut trace = Trace::new(&["residual", "pattern_change"]);
    let mut xi_prev = net.outputs(&net.w) - &net.y;
    loop {
        let t = hb.iteration();
        let w = Matrix::from_column_slice(m, d, hb.w().as_slice());
        let xi = net.outputs(&w) - &net.y;
        let g = net.gradient(&w);
        let stacked = (xi.norm_squared() + xi_prev.norm_squared()).sqrt();
        trace.push(
            TraceRow::new(t as u64, 0.5 * xi.norm_squared(), g.norm())
                .with_dist(Some(stacked))
                .with_extras(vec![Some(xi.norm()), Some(net.pattern_change(&net.w, &w))]),
        );
        if t == t_max {
            return Ok(ReluRun { w_final: w, trace });
        }
        hb.step(&flatten(&g))?;
        xi_prev = xi;
    }
}
