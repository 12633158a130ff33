//! Points of the spectrahedron `Δ_d = {X ⪰ 0, Tr X = 1}` and the randomized
//! rank-one oracle `Ψ_u`.

use core_oracles::linalg::{sym_eigen_sorted, sym_extreme_eigenvalues};
use core_oracles::{Matrix, Vector};

use crate::error::ProjectionFreeError;

pub const PSD_TOL: f64 = 1e-9;
pub const TRACE_TOL: f64 = 1e-9;
pub const UNIT_TOL: f64 = 1e-12;

/// Symmetric `(d1+d2)×(d1+d2)` matrix with block views
/// `[[X1, X2], [X2ᵀ, X3]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrahedronPoint {
    x: Matrix,
    d1: usize,
    d2: usize,
}

impl SpectrahedronPoint {
    /// Wraps `x` after checking the shape, symmetry, PSD and trace invariants.
    pub fn new(x: Matrix, d1: usize, d2: usize) -> Result<Self, ProjectionFreeError> {
        let p = SpectrahedronPoint { x, d1, d2 };
        p.check()?;
        Ok(p)
    }

    pub(crate) fn new_unchecked(x: Matrix, d1: usize, d2: usize) -> Self {
        SpectrahedronPoint { x, d1, d2 }
    }

    /// `I/d`.
    pub fn uniform(d1: usize, d2: usize) -> Self {
        let d = d1 + d2;
        SpectrahedronPoint { x: Matrix::identity(d, d) / d as f64, d1, d2 }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.x
    }

    pub fn into_matrix(self) -> Matrix {
        self.x
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d1, self.d2)
    }

    pub fn block1(&self) -> Matrix {
        self.x.view((0, 0), (self.d1, self.d1)).into_owned()
    }

    pub fn block2(&self) -> Matrix {
        self.x.view((0, self.d1), (self.d1, self.d2)).into_owned()
    }

    pub fn block3(&self) -> Matrix {
        self.x.view((self.d1, self.d1), (self.d2, self.d2)).into_owned()
    }

    pub fn trace(&self) -> f64 {
        self.x.trace()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        sym_extreme_eigenvalues(&self.x).0
    }

    /// `(1−β)·self + β·other`.
    pub fn mix(&self, other: &SpectrahedronPoint, beta: f64) -> SpectrahedronPoint {
        SpectrahedronPoint { x: &self.x * (1.0 - beta) + &other.x * beta, d1: self.d1, d2: self.d2 }
    }

    pub fn check(&self) -> Result<(), ProjectionFreeError> {
        let d = self.d1 + self.d2;
        if self.x.nrows() != d || self.x.ncols() != d {
            return Err(ProjectionFreeError::Shape(format!(
                "expected {d}x{d}, got {}x{}",
                self.x.nrows(),
                self.x.ncols()
            )));
        }
        if self.x.iter().any(|v| !v.is_finite()) {
            return Err(ProjectionFreeError::NonFinite);
        }
        let asym = core_oracles::linalg::asymmetry(&self.x);
        if asym > PSD_TOL {
            return Err(ProjectionFreeError::Invalid("X", format!("not symmetric ({asym:e})")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(ProjectionFreeError::Invalid("X", format!("trace {tr} != 1")));
        }
        let lmin = self.min_eigenvalue();
        if lmin < -PSD_TOL {
            return Err(ProjectionFreeError::Invalid("X", format!("min eigenvalue {lmin:e}")));
        }
        Ok(())
    }
}

/// `[[0, g], [gᵀ, 0]]`.
pub fn embed_gradient(g: &Matrix) -> Matrix {
    let (d1, d2) = g.shape();
    let mut out = Matrix::zeros(d1 + d2, d1 + d2);
    out.view_mut((0, d1), (d1, d2)).copy_from(g);
    out.view_mut((d1, 0), (d2, d1)).copy_from(&g.transpose());
    out
}

/// Eigendecomposition of `D` prepared for repeated `Ψ_u` evaluations.
#[derive(Debug, Clone)]
pub struct ExpHalf {
    vectors: Matrix,
    scale: Vector,
}

impl ExpHalf {
    pub fn new(d: &Matrix) -> Result<Self, ProjectionFreeError> {
        if d.nrows() != d.ncols() {
            return Err(ProjectionFreeError::Shape("D must be square".into()));
        }
        if d.iter().any(|v| !v.is_finite()) {
            return Err(ProjectionFreeError::NonFinite);
        }
        let sym = (d + d.transpose()) * 0.5;
        let (vals, vectors) = sym_eigen_sorted(&sym);
        let top = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        // shifting by the top eigenvalue cancels in the normalization
        let scale = vals.map(|l| ((l - top) / 2.0).exp());
        Ok(ExpHalf { vectors, scale })
    }

    /// `v = e^{D/2} u / ‖e^{D/2} u‖`, so `Ψ_u(D) = v vᵀ`.
    pub fn direction(&self, u: &Vector) -> Vector {
        let coeffs = self.vectors.tr_mul(u).component_mul(&self.scale);
        let v = &self.vectors * coeffs;
        let n = v.norm();
        v / n
    }
}

fn check_unit(u: &Vector) -> Result<(), ProjectionFreeError> {
    let n = u.norm();
    if (n - 1.0).abs() > UNIT_TOL {
        return Err(ProjectionFreeError::NotUnit(n));
    }
    Ok(())
}

/// `Ψ_u(D) = e^{D/2} u uᵀ e^{D/2} / (uᵀ e^D u)` for a `(d1+d2)`-square `D`.
pub fn psi_oracle(d: &Matrix, u: &Vector, d1: usize, d2: usize) -> Result<SpectrahedronPoint, ProjectionFreeError> {
    if d.nrows() != d1 + d2 || u.len() != d1 + d2 {
        return Err(ProjectionFreeError::Shape("D and u must have dimension d1+d2".into()));
    }
    check_unit(u)?;
    let v = ExpHalf::new(d)?.direction(u);
    Ok(SpectrahedronPoint::new_unchecked(&v * v.transpose(), d1, d2))
}
