//! Nuclear-norm-ball minimization through the spectrahedron: the ball of
//! radius `r` is the image of `Δ_d` under `X ↦ 2r X⁽²⁾`, and the iterates
//! only need matrix-exponential-vector products.

use core_oracles::linalg::{nuclear_norm, spectral_norm};
use core_oracles::random::unit_sphere;
use core_oracles::seed::{derive_seed2, rng_from};
use core_oracles::{Matrix, ObjectiveOracle, Trace, TraceRow, Vector};
use rayon::prelude::*;

use crate::error::ProjectionFreeError;
use crate::spectra::{embed_gradient, ExpHalf, SpectrahedronPoint};

/// Number of oracle draws per round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MSchedule {
    /// `m_t = max(⌈log(4d/δ)⌉, t)`.
    Default,
    Constant(usize),
}

impl MSchedule {
    pub fn m(&self, t: usize, d: usize, delta: f64) -> usize {
        match *self {
            MSchedule::Default => ((4.0 * d as f64 / delta).ln().ceil() as usize).max(t).max(1),
            MSchedule::Constant(m) => m,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NuclearConfig {
    pub d1: usize,
    pub d2: usize,
    pub radius: f64,
    /// Defaults to the limit `1/(36 L̂)`.
    pub eta: Option<f64>,
    pub delta: f64,
    pub t_max: usize,
    pub seed: u64,
    /// Defaults to `2rL` with `L` the declared smoothness of the objective.
    pub l_hat: Option<f64>,
    pub m_schedule: MSchedule,
    pub parallel: bool,
}

impl NuclearConfig {
    pub fn new(d1: usize, d2: usize, radius: f64, t_max: usize, seed: u64) -> Self {
        NuclearConfig {
            d1,
            d2,
            radius,
            eta: None,
            delta: 0.1,
            t_max,
            seed,
            l_hat: None,
            m_schedule: MSchedule::Default,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NuclearOutput {
    /// `2r W_T⁽²⁾`.
    pub w_out: Matrix,
    pub w_final: SpectrahedronPoint,
    pub x_final: SpectrahedronPoint,
    pub eta: f64,
    /// Columns: `m_t`, `x_trace_err`, `x_min_eig`, `w_min_eig`, `z_min_eig`,
    /// `nuclear_norm`. Row 0 is the starting point.
    pub trace: Trace,
}

/// Least squares on observed entries: `½ Σ_{(i,j)∈Ω} (X_ij − M_ij)²`,
/// with `X` flattened column-major.
#[derive(Debug, Clone)]
pub struct MatrixCompletion {
    target: Matrix,
    mask: Vec<(usize, usize)>,
}

impl MatrixCompletion {
    pub fn new(target: Matrix, mask: Vec<(usize, usize)>) -> Result<Self, ProjectionFreeError> {
        let (r, c) = target.shape();
        if let Some(&(i, j)) = mask.iter().find(|&&(i, j)| i >= r || j >= c) {
            return Err(ProjectionFreeError::Shape(format!("observed entry ({i},{j}) outside {r}x{c}")));
        }
        Ok(MatrixCompletion { target, mask })
    }

    pub fn target(&self) -> &Matrix {
        &self.target
    }

    pub fn mask(&self) -> &[(usize, usize)] {
        &self.mask
    }

    pub fn shape(&self) -> (usize, usize) {
        self.target.shape()
    }

    fn index(&self, i: usize, j: usize) -> usize {
        j * self.target.nrows() + i
    }
}

impl ObjectiveOracle for MatrixCompletion {
    fn dim(&self) -> usize {
        self.target.len()
    }

    fn value(&self, w: &Vector) -> f64 {
        self.mask
            .iter()
            .map(|&(i, j)| {
                let r = w[self.index(i, j)] - self.target[(i, j)];
                0.5 * r * r
            })
            .sum()
    }

    fn gradient(&self, w: &Vector) -> Vector {
        let mut g = Vector::zeros(self.dim());
        for &(i, j) in &self.mask {
            let k = self.index(i, j);
            g[k] = w[k] - self.target[(i, j)];
        }
        g
    }

    fn smoothness(&self) -> f64 {
        if self.mask.is_empty() {
            0.0
        } else {
            1.0
        }
    }
}

fn eval(f: &dyn ObjectiveOracle, m: &Matrix) -> (f64, Matrix) {
    let v = Vector::from_column_slice(m.as_slice());
    let g = f.gradient(&v);
    (f.value(&v), Matrix::from_column_slice(m.nrows(), m.ncols(), g.as_slice()))
}

pub fn eta_limit(l_hat: f64) -> f64 {
    if l_hat > 0.0 {
        1.0 / (36.0 * l_hat)
    } else {
        f64::INFINITY
    }
}

pub fn nuclear_run(f: &dyn ObjectiveOracle, cfg: &NuclearConfig) -> Result<NuclearOutput, ProjectionFreeError> {
    let (d1, d2) = (cfg.d1, cfg.d2);
    let d = d1 + d2;
    if f.dim() != d1 * d2 {
        return Err(ProjectionFreeError::Shape(format!("objective has dim {}, expected {}", f.dim(), d1 * d2)));
    }
    if !(cfg.radius > 0.0 && cfg.radius.is_finite()) {
        return Err(ProjectionFreeError::Invalid("radius", format!("{}", cfg.radius)));
    }
    if !(cfg.delta > 0.0 && cfg.delta < 1.0) {
        return Err(ProjectionFreeError::Invalid("delta", format!("{} not in (0, 1)", cfg.delta)));
    }
    if cfg.m_schedule == MSchedule::Constant(0) {
        return Err(ProjectionFreeError::Invalid("m_schedule", "at least one draw per round".into()));
    }
    let l_hat = cfg.l_hat.unwrap_or(2.0 * cfg.radius * f.smoothness());
    let limit = eta_limit(l_hat);
    let eta = match cfg.eta {
        Some(e) => e,
        None if limit.is_finite() => limit,
        None => 1.0,
    };
    if !(eta > 0.0) {
        return Err(ProjectionFreeError::Invalid("eta", format!("{eta}")));
    }
    if eta > limit {
        return Err(ProjectionFreeError::EtaTooLarge { eta, limit });
    }
    let two_r = 2.0 * cfg.radius;

    let mut trace = Trace::new(&["m_t", "x_trace_err", "x_min_eig", "w_min_eig", "z_min_eig", "nuclear_norm"]);
    let mut w = SpectrahedronPoint::uniform(d1, d2);
    let mut x = w.clone();
    let mut g_acc = Matrix::zeros(d, d);

    let out0 = w.block2() * two_r;
    let (f0, g0) = eval(f, &out0);
    let w0_min = w.min_eigenvalue();
    trace.push(TraceRow::new(0, f0, spectral_norm(&g0)).with_extras(vec![
        None,
        Some((x.trace() - 1.0).abs()),
        Some(w0_min),
        Some(w0_min),
        None,
        Some(nuclear_norm(&out0)),
    ]));

    for t in 1..=cfg.t_max {
        let beta = 2.0 / (t as f64 + 1.0);
        let z = w.mix(&x, beta);
        let (_, grad) = eval(f, &(z.block2() * two_r));
        g_acc -= embed_gradient(&grad) * (eta * t as f64);

        let m_t = cfg.m_schedule.m(t, d, cfg.delta);
        let exp_half = ExpHalf::new(&g_acc)?;
        let draw = |j: usize| {
            let mut rng = rng_from(derive_seed2(cfg.seed, "nuclear_draw", t as u64, j as u64));
            exp_half.direction(&unit_sphere(&mut rng, d))
        };
        let dirs: Vec<Vector> = if cfg.parallel {
            (0..m_t).into_par_iter().map(draw).collect()
        } else {
            (0..m_t).map(draw).collect()
        };
        let mut acc = Matrix::zeros(d, d);
        for v in &dirs {
            acc.ger(1.0, v, v, 1.0);
        }
        acc /= m_t as f64;
        x = SpectrahedronPoint::new_unchecked(acc, d1, d2);
        w = w.mix(&x, beta);

        let out = w.block2() * two_r;
        let (fv, gv) = eval(f, &out);
        trace.push(TraceRow::new(t as u64, fv, spectral_norm(&gv)).with_extras(vec![
            Some(m_t as f64),
            Some((x.trace() - 1.0).abs()),
            Some(x.min_eigenvalue()),
            Some(w.min_eigenvalue()),
            Some(z.min_eigenvalue()),
            Some(nuclear_norm(&out)),
        ]));
    }
    let w_out = w.block2() * two_r;
    Ok(NuclearOutput { w_out, w_final: w, x_final: x, eta, trace })
}
