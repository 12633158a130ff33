//! Feasible sets exposed through a linear minimization oracle.

use crate::error::OracleError;
use crate::linalg::{project_l1_ball, project_simplex, top_singular_pair, singular_values, Matrix, Vector};
use crate::prox::Psi;

/// A closed convex set accessed through its LMO plus optional richer oracles.
pub trait FeasibleSet: Send + Sync {
    fn dim(&self) -> usize;

    /// `argmin_{x ∈ K} ⟨x, v⟩`. Ties resolve to the lowest coordinate index.
    ///
    /// Callers must check [`FeasibleSet::is_bounded`] first; unbounded sets
    /// panic here.
    fn lmo(&self, v: &Vector) -> Vector;

    fn contains(&self, x: &Vector, tol: f64) -> bool;

    /// Squared diameter `D`; infinite for unbounded sets.
    fn diameter_sq(&self) -> f64;

    fn project(&self, _x: &Vector) -> Option<Vector> {
        None
    }

    /// `argmin_{x ∈ K} ψ(x) + (1/2λ)‖x - v‖²` when a closed form exists.
    fn prox(&self, v: &Vector, _lam: f64, psi: &Psi) -> Option<Vector> {
        match psi {
            Psi::Zero => self.project(v),
            _ => None,
        }
    }

    /// Strong convexity parameter of the set itself (0 if none).
    fn strong_convexity(&self) -> f64 {
        0.0
    }

    fn gauge(&self, _x: &Vector) -> Option<f64> {
        None
    }

    /// Strong convexity of the squared gauge, for λ-gauge sets.
    fn gauge_sq_strong_convexity(&self) -> Option<f64> {
        None
    }

    fn is_bounded(&self) -> bool {
        true
    }

    /// A fixed interior or central point used for default initializations.
    fn canonical_point(&self) -> Vector;
}

/// Free-function form of [`FeasibleSet::lmo`] with a dimension check.
pub fn lmo(set: &dyn FeasibleSet, v: &Vector) -> Result<Vector, OracleError> {
    if v.len() != set.dim() {
        return Err(OracleError::DimensionMismatch { expected: set.dim(), got: v.len() });
    }
    if !set.is_bounded() {
        return Err(OracleError::Unsupported("lmo on an unbounded set"));
    }
    Ok(set.lmo(v))
}

/// Gauge value; `+∞` if `x` lies outside the cone generated by the set.
pub fn gauge_eval(set: &dyn FeasibleSet, x: &Vector) -> Result<f64, OracleError> {
    if x.len() != set.dim() {
        return Err(OracleError::DimensionMismatch { expected: set.dim(), got: x.len() });
    }
    set.gauge(x).ok_or(OracleError::Unsupported("gauge"))
}

fn first_basis(d: usize, scale: f64) -> Vector {
    let mut e = Vector::zeros(d);
    if d > 0 {
        e[0] = scale;
    }
    e
}

/// Probability simplex `{x ≥ 0, Σx = 1}`.
#[derive(Debug, Clone)]
pub struct Simplex {
    pub d: usize,
}

impl Simplex {
    pub fn new(d: usize) -> Self {
        Simplex { d }
    }
}

impl FeasibleSet for Simplex {
    fn dim(&self) -> usize {
        self.d
    }

    fn lmo(&self, v: &Vector) -> Vector {
        let mut best = 0;
        for i in 1..v.len() {
            if v[i] < v[best] {
                best = i;
            }
        }
        let mut e = Vector::zeros(self.d);
        e[best] = 1.0;
        e
    }

    fn contains(&self, x: &Vector, tol: f64) -> bool {
        x.len() == self.d && x.iter().all(|&xi| xi >= -tol) && (x.sum() - 1.0).abs() <= tol
    }

    fn diameter_sq(&self) -> f64 {
        2.0
    }

    fn project(&self, x: &Vector) -> Option<Vector> {
        Some(project_simplex(x, 1.0))
    }

    fn canonical_point(&self) -> Vector {
        Vector::from_element(self.d, 1.0 / self.d as f64)
    }
}

/// Euclidean ball of radius `r` centered at the origin.
#[derive(Debug, Clone)]
pub struct L2Ball {
    pub d: usize,
    pub radius: f64,
}

impl L2Ball {
    pub fn new(d: usize, radius: f64) -> Result<Self, OracleError> {
        if !(radius > 0.0) {
            return Err(OracleError::invalid("radius", "must be positive"));
        }
        Ok(L2Ball { d, radius })
    }

    pub fn unit(d: usize) -> Self {
        L2Ball { d, radius: 1.0 }
    }
}

impl FeasibleSet for L2Ball {
    fn dim(&self) -> usize {
        self.d
    }

    fn lmo(&self, v: &Vector) -> Vector {
        let n = v.norm();
        if n == 0.0 {
            return first_basis(self.d, self.radius);
        }
        -v * (self.radius / n)
    }

    fn contains(&self, x: &Vector, tol: f64) -> bool {
        x.len() == self.d && x.norm() <= self.radius + tol
    }

    fn diameter_sq(&self) -> f64 {
        4.0 * self.radius * self.radius
    }

    fn project(&self, x: &Vector) -> Option<Vector> {
        let n = x.norm();
        Some(if n <= self.radius { x.clone() } else { x * (self.radius / n) })
    }

    fn prox(&self, v: &Vector, lam: f64, psi: &Psi) -> Option<Vector> {
        match psi {
            Psi::Zero | Psi::HalfSq(_) => self.project(&psi.prox(v, lam)),
            Psi::L1(_) => None,
        }
    }

    fn strong_convexity(&self) -> f64 {
        1.0 / self.radius
    }

    fn gauge(&self, x: &Vector) -> Option<f64> {
        Some(x.norm() / self.radius)
    }

    fn gauge_sq_strong_convexity(&self) -> Option<f64> {
        Some(2.0 / (self.radius * self.radius))
    }

    fn canonical_point(&self) -> Vector {
        Vector::zeros(self.d)
    }
}

/// `{x : ‖x‖_p ≤ r}` for `p ∈ (1, 2]`.
#[derive(Debug, Clone)]
pub struct LpBall {
    pub d: usize,
    pub p: f64,
    pub radius: f64,
}

impl LpBall {
    pub fn new(d: usize, p: f64, radius: f64) -> Result<Self, OracleError> {
        if !(p > 1.0 && p <= 2.0) {
            return Err(OracleError::invalid("p", "must lie in (1, 2]"));
        }
        if !(radius > 0.0) {
            return Err(OracleError::invalid("radius", "must be positive"));
        }
        Ok(LpBall { d, p, radius })
    }

    fn dual_exponent(&self) -> f64 {
        self.p / (self.p - 1.0)
    }
}

impl FeasibleSet for LpBall {
    fn dim(&self) -> usize {
        self.d
    }

    fn lmo(&self, v: &Vector) -> Vector {
        let q = self.dual_exponent();
        let nq = v.iter().map(|x| x.abs().powf(q)).sum::<f64>().powf(1.0 / q);
        if nq == 0.0 {
            return first_basis(self.d, self.radius);
        }
        v.map(|x| -self.radius * x.signum() * (x.abs() / nq).powf(q - 1.0))
    }

    fn contains(&self, x: &Vector, tol: f64) -> bool {
        x.len() == self.d && x.lp_norm_f(self.p) <= self.radius + tol
    }

    fn diameter_sq(&self) -> f64 {
        // For p ≤ 2 the ball sits inside the l2 ball of the same radius and
        // touches it at ±r·e_i.
        4.0 * self.radius * self.radius
    }

    fn strong_convexity(&self) -> f64 {
        (self.p - 1.0) / self.radius
    }

    fn gauge(&self, x: &Vector) -> Option<f64> {
        Some(x.lp_norm_f(self.p) / self.radius)
    }

    fn gauge_sq_strong_convexity(&self) -> Option<f64> {
        Some(2.0 * (self.p - 1.0) / (self.radius * self.radius))
    }

    fn canonical_point(&self) -> Vector {
        Vector::zeros(self.d)
    }
}

trait LpNorm {
    fn lp_norm_f(&self, p: f64) -> f64;
}

impl LpNorm for Vector {
    fn lp_norm_f(&self, p: f64) -> f64 {
        self.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Nuclear-norm ball of `d1 × d2` matrices, stored column-major as vectors.
#[derive(Debug, Clone)]
pub struct NuclearBall {
    pub d1: usize,
    pub d2: usize,
    pub radius: f64,
}

impl NuclearBall {
    pub fn new(d1: usize, d2: usize, radius: f64) -> Result<Self, OracleError> {
        if !(radius > 0.0) {
            return Err(OracleError::invalid("radius", "must be positive"));
        }
        Ok(NuclearBall { d1, d2, radius })
    }

    pub fn to_matrix(&self, v: &Vector) -> Matrix {
        Matrix::from_column_slice(self.d1, self.d2, v.as_slice())
    }

    pub fn to_vector(&self, m: &Matrix) -> Vector {
        Vector::from_column_slice(m.as_slice())
    }
}

impl FeasibleSet for NuclearBall {
    fn dim(&self) -> usize {
        self.d1 * self.d2
    }

    fn lmo(&self, v: &Vector) -> Vector {
        let g = self.to_matrix(v);
        let (s, u, w) = top_singular_pair(&g);
        if s == 0.0 {
            return first_basis(self.dim(), self.radius);
        }
        self.to_vector(&(u * w.transpose() * (-self.radius)))
    }

    fn contains(&self, x: &Vector, tol: f64) -> bool {
        x.len() == self.dim() && singular_values(&self.to_matrix(x)).iter().sum::<f64>() <= self.radius + tol
    }

    fn diameter_sq(&self) -> f64 {
        4.0 * self.radius * self.radius
    }

    fn project(&self, x: &Vector) -> Option<Vector> {
        let svd = self.to_matrix(x).svd(true, true);
        let s = project_l1_ball(&svd.singular_values, self.radius);
        let u = svd.u.expect("u requested");
        let vt = svd.v_t.expect("v_t requested");
        let m = &u * Matrix::from_diagonal(&s) * &vt;
        Some(self.to_vector(&m))
    }

    fn gauge(&self, x: &Vector) -> Option<f64> {
        Some(singular_values(&self.to_matrix(x)).iter().sum::<f64>() / self.radius)
    }

    fn canonical_point(&self) -> Vector {
        Vector::zeros(self.dim())
    }
}

/// All of R^d. Has no LMO; learners needing one reject it.
#[derive(Debug, Clone)]
pub struct Unconstrained {
    pub d: usize,
}

impl Unconstrained {
    pub fn new(d: usize) -> Self {
        Unconstrained { d }
    }
}

impl FeasibleSet for Unconstrained {
    fn dim(&self) -> usize {
        self.d
    }

    fn lmo(&self, _v: &Vector) -> Vector {
        panic!("lmo called on an unbounded set");
    }

    fn contains(&self, x: &Vector, _tol: f64) -> bool {
        x.len() == self.d && x.iter().all(|v| v.is_finite())
    }

    fn diameter_sq(&self) -> f64 {
        f64::INFINITY
    }

    fn project(&self, x: &Vector) -> Option<Vector> {
        Some(x.clone())
    }

    fn prox(&self, v: &Vector, lam: f64, psi: &Psi) -> Option<Vector> {
        Some(psi.prox(v, lam))
    }

    fn is_bounded(&self) -> bool {
        false
    }

    fn canonical_point(&self) -> Vector {
        Vector::zeros(self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    #[test]
    fn simplex_lmo_picks_min_index() {
        let s = Simplex::new(3);
        assert_eq!(s.lmo(&dvector![3.0, -1.0, 2.0]), dvector![0.0, 1.0, 0.0]);
        assert_eq!(s.lmo(&dvector![1.0, 1.0, 1.0]), dvector![1.0, 0.0, 0.0]);
    }

    #[test]
    fn ball_lmo() {
        let b = L2Ball::unit(2);
        let x = b.lmo(&dvector![3.0, 4.0]);
        assert!((x - dvector![-0.6, -0.8]).norm() < 1e-15);
        assert_eq!(b.lmo(&Vector::zeros(2)), dvector![1.0, 0.0]);
    }

    #[test]
    fn gauge_examples() {
        let b = L2Ball::new(2, 2.0).unwrap();
        assert_eq!(gauge_eval(&b, &dvector![2.0, 0.0]).unwrap(), 1.0);
        assert_eq!(gauge_eval(&b, &dvector![1.0, 0.0]).unwrap(), 0.5);
        let lp = LpBall::new(2, 1.5, 1.0).unwrap();
        let expected = (2.0 * 0.5f64.powf(1.5)).powf(2.0 / 3.0);
        assert!((gauge_eval(&lp, &dvector![0.5, 0.5]).unwrap() - expected).abs() < 1e-14);
        assert!(gauge_eval(&Simplex::new(2), &dvector![0.5, 0.5]).is_err());
    }

    #[test]
    fn nuclear_lmo_is_rank_one_negative_top_pair() {
        let nb = NuclearBall::new(2, 2, 3.0).unwrap();
        // G = diag(5, 1): top pair e1 e1ᵀ.
        let g = dvector![5.0, 0.0, 0.0, 1.0];
        let x = nb.lmo(&g);
        assert!((x - dvector![-3.0, 0.0, 0.0, 0.0]).norm() < 1e-12);
    }

    #[test]
    fn simplex_projection() {
        let s = Simplex::new(3);
        let p = s.project(&dvector![2.0, 0.0, 0.0]).unwrap();
        assert!((p - dvector![1.0, 0.0, 0.0]).norm() < 1e-15);
        let q = s.project(&dvector![0.5, 0.5, 0.5]).unwrap();
        assert!((q - Vector::from_element(3, 1.0 / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn lmo_free_fn_rejects_unbounded() {
        assert!(lmo(&Unconstrained::new(2), &dvector![1.0, 0.0]).is_err());
        assert!(lmo(&L2Ball::unit(3), &dvector![1.0, 0.0]).is_err());
    }
}
