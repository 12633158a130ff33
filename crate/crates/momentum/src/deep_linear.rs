use core_oracles::linalg::singular_values;
use core_oracles::random::{gaussian_matrix, orthonormal_columns, random_orthogonal};
use core_oracles::seed::{derive_seed, rng_from};
use core_oracles::{Matrix, Trace, TraceRow, Vector};

use crate::config::{HbVersion, MomentumConfig};
use crate::error::MomentumError;
use crate::hb::HeavyBall;

/// `N(x) = (1/√(m^{L−1} d_y)) W⁽ᴸ⁾ ⋯ W⁽¹⁾ x` with `W⁽¹⁾: m×d`, interior
/// `m×m`, `W⁽ᴸ⁾: d_y×m`.
#[derive(Debug, Clone)]
pub struct DeepLinearNet {
    pub layers: Vec<Matrix>,
}

/// Data `X: d×n` and labels `Y = W*X`.
#[derive(Debug, Clone)]
pub struct DeepLinearData {
    pub x: Matrix,
    pub y: Matrix,
    pub w_star: Matrix,
}

impl DeepLinearData {
    pub fn new(x: Matrix, w_star: Matrix) -> Result<Self, MomentumError> {
        if w_star.ncols() != x.nrows() {
            return Err(MomentumError::Shape(format!("W* has {} columns, X has {} rows", w_star.ncols(), x.nrows())));
        }
        let y = &w_star * &x;
        Ok(DeepLinearData { x, y, w_star })
    }

    /// Gaussian `X` and `W* = I + noise·W̄` with Gaussian `W̄`.
    pub fn perturbed_identity(d: usize, d_y: usize, n: usize, noise: f64, seed: u64) -> Self {
        let mut rng = rng_from(derive_seed(seed, "deep_linear_data", 0));
        let x = gaussian_matrix(&mut rng, d, n);
        let w_star = Matrix::identity(d_y, d) + gaussian_matrix(&mut rng, d_y, d) * noise;
        let y = &w_star * &x;
        DeepLinearData { x, y, w_star }
    }

    /// `X = U diag(s) Vᵀ` with random orthonormal `U: d×n`, `V: n×n` and
    /// squared singular values log-spaced in `[1, κ]`; `W* = I + noise·W̄`.
    pub fn conditioned(d: usize, d_y: usize, n: usize, kappa: f64, noise: f64, seed: u64) -> Result<Self, MomentumError> {
        if n == 0 || n > d {
            return Err(MomentumError::InvalidConfig(format!("need 1 ≤ n ≤ d, got n = {n}, d = {d}")));
        }
        if !(kappa >= 1.0) {
            return Err(MomentumError::KappaBelowOne(kappa));
        }
        let mut rng = rng_from(derive_seed(seed, "deep_linear_data", 1));
        let u = orthonormal_columns(&mut rng, d, n);
        let v = random_orthogonal(&mut rng, n);
        let s = Vector::from_iterator(
            n,
            (0..n).map(|i| if n == 1 { 1.0 } else { kappa.powf(i as f64 / (n - 1) as f64).sqrt() }),
        );
        let x = u * Matrix::from_diagonal(&s) * v.transpose();
        let w_star = Matrix::identity(d_y, d) + gaussian_matrix(&mut rng, d_y, d) * noise;
        DeepLinearData::new(x, w_star)
    }

    /// `σ²_max(X) / σ²_min(X)` over the nonzero singular values.
    pub fn kappa(&self) -> f64 {
        let (smax, smin) = self.sigma2_extremes();
        smax / smin
    }

    /// Largest and smallest nonzero squared singular values of `X`.
    pub fn sigma2_extremes(&self) -> (f64, f64) {
        let s = singular_values(&self.x);
        let smax = s.iter().cloned().fold(0.0, f64::max);
        let smin = s.iter().cloned().filter(|v| *v > 1e-12 * smax).fold(f64::INFINITY, f64::min);
        (smax * smax, smin * smin)
    }
}

impl DeepLinearNet {
    pub fn new(layers: Vec<Matrix>) -> Result<Self, MomentumError> {
        if layers.len() < 2 {
            return Err(MomentumError::InvalidConfig("depth must be at least 2".into()));
        }
        for l in 1..layers.len() {
            if layers[l].ncols() != layers[l - 1].nrows() {
                return Err(MomentumError::Shape(format!("layer {} does not chain onto layer {}", l + 1, l)));
            }
        }
        Ok(DeepLinearNet { layers })
    }

    /// Scaled orthogonal layers: `W⁽¹⁾ᵀW⁽¹⁾ = mI_d`, `W⁽ᴸ⁾W⁽ᴸ⁾ᵀ = mI_{d_y}`,
    /// interior `√m` times orthogonal.
    pub fn orthogonal_init(d: usize, d_y: usize, m: usize, depth: usize, seed: u64) -> Result<Self, MomentumError> {
        if m < d.max(d_y) {
            return Err(MomentumError::WidthTooSmall { m, required: d.max(d_y) });
        }
        if depth < 2 {
            return Err(MomentumError::InvalidConfig("depth must be at least 2".into()));
        }
        let sm = (m as f64).sqrt();
        let layers = (0..depth)
            .map(|l| {
                let mut rng = rng_from(derive_seed(seed, "deep_linear_init", l as u64));
                if l == 0 {
                    orthonormal_columns(&mut rng, m, d) * sm
                } else if l == depth - 1 {
                    orthonormal_columns(&mut rng, m, d_y).transpose() * sm
                } else {
                    random_orthogonal(&mut rng, m) * sm
                }
            })
            .collect();
        Ok(DeepLinearNet { layers })
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.layers[self.depth() - 1].nrows()
    }

    pub fn width(&self) -> usize {
        self.layers[0].nrows()
    }

    /// `1/√(m^{L−1} d_y)`.
    pub fn scale(&self) -> f64 {
        let m = self.width() as f64;
        (-0.5 * ((self.depth() - 1) as f64 * m.ln() + (self.output_dim() as f64).ln())).exp()
    }

    /// `U = scale · W⁽ᴸ:¹⁾X`.
    pub fn output(&self, x: &Matrix) -> Matrix {
        let mut u = x.clone();
        for w in &self.layers {
            u = w * u;
        }
        u * self.scale()
    }

    /// `∂ℓ/∂W⁽ˡ⁾ = scale · (W⁽ᴸ:ˡ⁺¹⁾)ᵀ (U − Y) Xᵀ (W⁽ˡ⁻¹:¹⁾)ᵀ` for
    /// `ℓ = ½‖U − Y‖²_F`, with the residual `U − Y`.
    pub fn gradients(&self, data: &DeepLinearData) -> (Vec<Matrix>, Matrix) {
        let depth = self.depth();
        let mut left = Vec::with_capacity(depth);
        let mut acc = data.x.clone();
        for w in &self.layers {
            left.push(acc.clone());
            acc = w * acc;
        }
        let e = acc * self.scale() - &data.y;
        let mut grads = vec![Matrix::zeros(0, 0); depth];
        let mut back = e.clone() * self.scale();
        for l in (0..depth).rev() {
            grads[l] = &back * left[l].transpose();
            back = self.layers[l].transpose() * back;
        }
        (grads, e)
    }

    fn flatten(&self) -> Vector {
        Vector::from_iterator(self.layers.iter().map(|w| w.len()).sum(), self.layers.iter().flat_map(|w| w.iter().cloned()))
    }

    fn unflatten(&self, v: &Vector) -> DeepLinearNet {
        let mut off = 0;
        let layers = self
            .layers
            .iter()
            .map(|w| {
                let m = Matrix::from_column_slice(w.nrows(), w.ncols(), &v.as_slice()[off..off + w.len()]);
                off += w.len();
                m
            })
            .collect();
        DeepLinearNet { layers }
    }
}

#[derive(Debug, Clone)]
pub struct DeepLinearRun {
    pub net_final: DeepLinearNet,
    pub kappa: f64,
    /// `f_value = ½‖U_t − Y‖²_F`, `dist` the stacked residual; extras
    /// `residual`, `bound` and `bound_ratio`.
    pub trace: Trace,
}

/// Layerwise heavy ball from `net`. The bound column is
/// `(1 − 1/(4√κ))ᵗ · 8√κ · ‖(ξ_0, ξ_{−1})‖` with `κ` from `X`.
pub fn deep_linear_train(
    net: &DeepLinearNet,
    data: &DeepLinearData,
    eta: f64,
    beta: f64,
    t_max: usize,
) -> Result<DeepLinearRun, MomentumError> {
    let (d, d_y, m) = (net.input_dim(), net.output_dim(), net.width());
    if m < d.max(d_y) {
        return Err(MomentumError::WidthTooSmall { m, required: d.max(d_y) });
    }
    if data.x.nrows() != d || data.y.nrows() != d_y || data.y.ncols() != data.x.ncols() {
        return Err(MomentumError::Shape(format!(
            "network maps {d} → {d_y}, data X {}×{}, Y {}×{}",
            data.x.nrows(),
            data.x.ncols(),
            data.y.nrows(),
            data.y.ncols()
        )));
    }
    let kappa = data.kappa();
    let rate = 1.0 - 1.0 / (4.0 * kappa.sqrt());
    let cfg = MomentumConfig::new(eta, beta, net.flatten())?;
    let mut hb = HeavyBall::new(&cfg, HbVersion::Hb2)?;
    let mut trace = Trace::new(&["residual", "bound", "bound_ratio"]);
    let mut current = net.clone();
    let mut res_prev: Option<f64> = None;
    let mut initial = 0.0;
    loop {
        let t = hb.iteration();
        let (grads, e) = current.gradients(data);
        let r = e.norm();
        let stacked = (r * r + res_prev.unwrap_or(r).powi(2)).sqrt();
        if t == 0 {
            initial = stacked;
        }
        let bound = rate.powi(t as i32) * 8.0 * kappa.sqrt() * initial;
        let gnorm = grads.iter().map(|g| g.norm_squared()).sum::<f64>().sqrt();
        trace.push(
            TraceRow::new(t as u64, 0.5 * r * r, gnorm)
                .with_dist(Some(stacked))
                .with_extras(vec![Some(r), Some(bound), Some(if bound > 0.0 { stacked / bound } else { 0.0 })]),
        );
        if t == t_max {
            return Ok(DeepLinearRun { net_final: current, kappa, trace });
        }
        let g = DeepLinearNet { layers: grads }.flatten();
        hb.step(&g)?;
        current = current.unflatten(hb.w());
        res_prev = Some(r);
    }
}
