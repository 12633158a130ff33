//! Benchmark objectives with a saddle at or near the origin.

use core_oracles::objective::sample_index;
use core_oracles::random::{gaussian_matrix, gaussian_vector};
use core_oracles::seed::{derive_seed, rng_from};
use core_oracles::{FiniteSum, Matrix, ObjectiveOracle, Vector};

/// `(1/n) Σ ½wᵀHw + b_iᵀw + ‖w‖₁₀¹⁰` with `H = diag(1, −0.1)` and
/// `b_i ~ N(0, diag(0.1, 0.001))`.
#[derive(Debug, Clone)]
pub struct ToySaddle {
    h: Matrix,
    b: Vec<Vector>,
    b_mean: Vector,
}

pub fn toy_saddle_objective(n: usize, seed: u64) -> ToySaddle {
    assert!(n >= 1, "toy objective needs at least one component");
    let mut rng = rng_from(derive_seed(seed, "toy_saddle", 0));
    let sd = [0.1f64.sqrt(), 0.001f64.sqrt()];
    let b: Vec<Vector> = (0..n)
        .map(|_| {
            let g = gaussian_vector(&mut rng, 2);
            Vector::from_fn(2, |j, _| g[j] * sd[j])
        })
        .collect();
    ToySaddle::new(Matrix::from_diagonal(&Vector::from_vec(vec![1.0, -0.1])), b)
}

impl ToySaddle {
    pub fn new(h: Matrix, b: Vec<Vector>) -> Self {
        assert!(!b.is_empty());
        let d = h.nrows();
        let mut b_mean = Vector::zeros(d);
        for bi in &b {
            b_mean += bi;
        }
        b_mean /= b.len() as f64;
        ToySaddle { h, b, b_mean }
    }

    pub fn h(&self) -> &Matrix {
        &self.h
    }

    pub fn offsets(&self) -> &[Vector] {
        &self.b
    }

    pub fn mean_offset(&self) -> &Vector {
        &self.b_mean
    }

    fn smooth_grad(&self, w: &Vector) -> Vector {
        &self.h * w + w.map(|x| 10.0 * x.powi(9))
    }
}

impl ObjectiveOracle for ToySaddle {
    fn dim(&self) -> usize {
        self.h.nrows()
    }

    fn value(&self, w: &Vector) -> f64 {
        0.5 * w.dot(&(&self.h * w)) + self.b_mean.dot(w) + w.iter().map(|x| x.powi(10)).sum::<f64>()
    }

    fn gradient(&self, w: &Vector) -> Vector {
        self.smooth_grad(w) + &self.b_mean
    }

    fn stochastic_gradient(&self, w: &Vector, seed: u64) -> Option<Vector> {
        Some(self.component_gradient(sample_index(seed, self.b.len()), w))
    }

    fn smoothness(&self) -> f64 {
        f64::INFINITY
    }

    fn hessian(&self, w: &Vector) -> Option<Matrix> {
        Some(&self.h + Matrix::from_diagonal(&w.map(|x| 90.0 * x.powi(8))))
    }
}

impl FiniteSum for ToySaddle {
    fn n_components(&self) -> usize {
        self.b.len()
    }

    fn component_gradient(&self, i: usize, w: &Vector) -> Vector {
        self.smooth_grad(w) + &self.b[i]
    }
}

/// `(1/n) Σ ((a_iᵀw)² − y_i)²` with `y_i = (a_iᵀw*)²`.
#[derive(Debug, Clone)]
pub struct PhaseRetrieval {
    a: Matrix,
    y: Vector,
    w_star: Vector,
}

/// `w* ~ N(0, I/d)`, rows `a_i ~ N(0, I)`.
pub fn phase_retrieval_objective(n: usize, d: usize, seed: u64) -> PhaseRetrieval {
    let (a, w_star) = phase_data(n, d, seed);
    PhaseRetrieval::new(a, w_star)
}

fn phase_data(n: usize, d: usize, seed: u64) -> (Matrix, Vector) {
    assert!(n >= 1 && d >= 1);
    let mut rng = rng_from(derive_seed(seed, "phase_retrieval", 0));
    let w_star = gaussian_vector(&mut rng, d) / (d as f64).sqrt();
    let a = gaussian_matrix(&mut rng, n, d);
    (a, w_star)
}

/// Starting point `w0 ~ N(0, I/(10000 d))`.
pub fn phase_init(d: usize, seed: u64) -> Vector {
    let mut rng = rng_from(derive_seed(seed, "phase_init", 0));
    gaussian_vector(&mut rng, d) / (10000.0 * d as f64).sqrt()
}

impl PhaseRetrieval {
    pub fn new(a: Matrix, w_star: Vector) -> Self {
        assert_eq!(a.ncols(), w_star.len());
        let y = (&a * &w_star).map(|z| z * z);
        PhaseRetrieval { a, y, w_star }
    }

    pub fn w_star(&self) -> &Vector {
        &self.w_star
    }

    pub fn design(&self) -> &Matrix {
        &self.a
    }

    /// `min(‖w − w*‖, ‖w + w*‖) / ‖w*‖`.
    pub fn relative_distance(&self, w: &Vector) -> f64 {
        let p = (w - &self.w_star).norm();
        let m = (w + &self.w_star).norm();
        p.min(m) / self.w_star.norm()
    }

    fn n(&self) -> f64 {
        self.a.nrows() as f64
    }
}

impl ObjectiveOracle for PhaseRetrieval {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn value(&self, w: &Vector) -> f64 {
        let z = &self.a * w;
        z.iter().zip(self.y.iter()).map(|(z, y)| (z * z - y).powi(2)).sum::<f64>() / self.n()
    }

    fn gradient(&self, w: &Vector) -> Vector {
        let z = &self.a * w;
        let c = Vector::from_fn(z.len(), |i, _| 4.0 * (z[i] * z[i] - self.y[i]) * z[i]);
        self.a.transpose() * c / self.n()
    }

    fn stochastic_gradient(&self, w: &Vector, seed: u64) -> Option<Vector> {
        Some(self.component_gradient(sample_index(seed, self.a.nrows()), w))
    }

    fn smoothness(&self) -> f64 {
        f64::INFINITY
    }

    fn hessian(&self, w: &Vector) -> Option<Matrix> {
        let z = &self.a * w;
        let c = Vector::from_fn(z.len(), |i, _| 12.0 * z[i] * z[i] - 4.0 * self.y[i]);
        let scaled = Matrix::from_fn(self.a.nrows(), self.a.ncols(), |i, j| c[i] * self.a[(i, j)]);
        Some(self.a.transpose() * scaled / self.n())
    }
}

impl FiniteSum for PhaseRetrieval {
    fn n_components(&self) -> usize {
        self.a.nrows()
    }

    fn component_gradient(&self, i: usize, w: &Vector) -> Vector {
        let row = self.a.row(i).transpose();
        let z = row.dot(w);
        row * (4.0 * (z * z - self.y[i]) * z)
    }
}

/// `(1/(4n)) Σ (‖x_iᵀW‖² − y_i)²` over `W ∈ R^{d×K}`, flattened column-major
/// (column k is neuron k).
#[derive(Debug, Clone)]
pub struct OverParamPhase {
    x: Matrix,
    y: Vector,
    w_star: Vector,
    k: usize,
}

/// Same data draws as [`phase_retrieval_objective`] with the same seed.
pub fn overparam_phase_objective(k: usize, d: usize, n: usize, seed: u64) -> OverParamPhase {
    assert!(k >= 1, "K must be at least 1");
    let (x, w_star) = phase_data(n, d, seed);
    OverParamPhase::new(x, w_star, k)
}

impl OverParamPhase {
    pub fn new(x: Matrix, w_star: Vector, k: usize) -> Self {
        assert_eq!(x.ncols(), w_star.len());
        let y = (&x * &w_star).map(|z| z * z);
        OverParamPhase { x, y, w_star, k }
    }

    pub fn neurons(&self) -> usize {
        self.k
    }

    pub fn w_star(&self) -> &Vector {
        &self.w_star
    }

    pub fn unflatten(&self, w: &Vector) -> Matrix {
        Matrix::from_column_slice(self.x.ncols(), self.k, w.as_slice())
    }

    pub fn flatten(w: &Matrix) -> Vector {
        Vector::from_column_slice(w.as_slice())
    }

    /// `q* = Wᵀw*/‖Wᵀw*‖`, the closest unit vector. Returned as zero when
    /// `Wᵀw* = 0`, where every unit vector is equally close.
    pub fn q_star(&self, w: &Matrix) -> Vector {
        let p = w.transpose() * &self.w_star;
        let n = p.norm();
        if n == 0.0 {
            p
        } else {
            p / n
        }
    }

    /// Distance to the optimal set `{w* qᵀ : ‖q‖ = 1}`:
    /// `‖W − w* q*ᵀ‖_F = √(‖W‖² − 2‖Wᵀw*‖ + ‖w*‖²)`.
    pub fn dist(&self, w: &Vector) -> f64 {
        let wm = self.unflatten(w);
        let p = (wm.transpose() * &self.w_star).norm();
        (wm.norm_squared() - 2.0 * p + self.w_star.norm_squared()).max(0.0).sqrt()
    }

    /// `min_{‖q‖≤1} ‖W − w* qᵀ‖_F`. Agrees with [`dist`] when
    /// `‖Wᵀw*‖ ≥ ‖w*‖²`.
    ///
    /// [`dist`]: OverParamPhase::dist
    pub fn dist_ball(&self, w: &Vector) -> f64 {
        let wm = self.unflatten(w);
        let p = wm.transpose() * &self.w_star;
        let mut q = p / self.w_star.norm_squared();
        let qn = q.norm();
        if qn > 1.0 {
            q /= qn;
        }
        (wm - &self.w_star * q.transpose()).norm()
    }

    fn residuals(&self, wm: &Matrix) -> (Matrix, Vector) {
        let z = &self.x * wm;
        let r = Vector::from_fn(self.x.nrows(), |i, _| z.row(i).norm_squared() - self.y[i]);
        (z, r)
    }

    fn n(&self) -> f64 {
        self.x.nrows() as f64
    }
}

impl ObjectiveOracle for OverParamPhase {
    fn dim(&self) -> usize {
        self.x.ncols() * self.k
    }

    fn value(&self, w: &Vector) -> f64 {
        let (_, r) = self.residuals(&self.unflatten(w));
        r.norm_squared() / (4.0 * self.n())
    }

    fn gradient(&self, w: &Vector) -> Vector {
        let (z, r) = self.residuals(&self.unflatten(w));
        let rz = Matrix::from_fn(z.nrows(), z.ncols(), |i, j| r[i] * z[(i, j)]);
        Self::flatten(&(self.x.transpose() * rz / self.n()))
    }

    fn stochastic_gradient(&self, w: &Vector, seed: u64) -> Option<Vector> {
        Some(self.component_gradient(sample_index(seed, self.x.nrows()), w))
    }

    fn smoothness(&self) -> f64 {
        f64::INFINITY
    }

    fn hessian(&self, w: &Vector) -> Option<Matrix> {
        let wm = self.unflatten(w);
        let (z, r) = self.residuals(&wm);
        let d = self.x.ncols();
        let dim = d * self.k;
        let mut hess = Matrix::zeros(dim, dim);
        for i in 0..self.x.nrows() {
            let xi = self.x.row(i).transpose();
            // ∇r_i = 2 vec(x_i z_iᵀ), ∇²r_i = 2 I_K ⊗ x_i x_iᵀ
            let mut g = Vector::zeros(dim);
            for k in 0..self.k {
                g.rows_mut(k * d, d).copy_from(&(&xi * (2.0 * z[(i, k)])));
            }
            hess += &g * g.transpose() * 0.5;
            let xx = &xi * xi.transpose() * r[i];
            for k in 0..self.k {
                let mut blk = hess.view_mut((k * d, k * d), (d, d));
                blk += &xx;
            }
        }
        Some(hess / self.n())
    }
}

impl FiniteSum for OverParamPhase {
    fn n_components(&self) -> usize {
        self.x.nrows()
    }

    fn component_gradient(&self, i: usize, w: &Vector) -> Vector {
        let wm = self.unflatten(w);
        let xi = self.x.row(i).transpose();
        let z = wm.transpose() * &xi;
        let r = z.norm_squared() - self.y[i];
        Self::flatten(&(&xi * z.transpose() * r))
    }
}
