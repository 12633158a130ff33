//! Seeded random instances used by tests, criteria and experiments.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{Matrix, Vector};
use crate::objective::Quadratic;

pub fn gaussian_vector<R: Rng>(rng: &mut R, d: usize) -> Vector {
    Vector::from_iterator(d, (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)))
}

pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// Uniform draw from the unit sphere in R^d.
pub fn unit_sphere<R: Rng>(rng: &mut R, d: usize) -> Vector {
    loop {
        let g = gaussian_vector(rng, d);
        let n = g.norm();
        if n > 1e-300 {
            return g / n;
        }
    }
}

/// Orthogonal `n × n` matrix: QR of a Gaussian matrix with `diag(R) > 0`.
pub fn random_orthogonal<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    orthonormal_columns(rng, n, n)
}

/// `rows × cols` matrix with orthonormal columns (`rows ≥ cols`).
pub fn orthonormal_columns<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    assert!(rows >= cols);
    let g = gaussian_matrix(rng, rows, cols);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..cols {
        if r[(j, j)] < 0.0 {
            let c = -q.column(j);
            q.set_column(j, &c);
        }
    }
    q
}

/// Symmetric matrix with eigenvalues evenly log-spaced in `[lmin, lmax]`
/// (endpoints included) and a random eigenbasis.
pub fn spd_with_spectrum<R: Rng>(rng: &mut R, d: usize, lmin: f64, lmax: f64) -> Matrix {
    let q = random_orthogonal(rng, d);
    let eig = Vector::from_iterator(
        d,
        (0..d).map(|i| {
            if d == 1 {
                lmax
            } else {
                let s = i as f64 / (d - 1) as f64;
                lmin * (lmax / lmin).powf(s)
            }
        }),
    );
    let m = &q * Matrix::from_diagonal(&eig) * q.transpose();
    (&m + m.transpose()) * 0.5
}

/// `½ (w - c)ᵀΓ(w - c)` with spectrum in `[lmin, lmax]` and Gaussian center scaled by `center_scale`.
pub fn random_quadratic<R: Rng>(rng: &mut R, d: usize, lmin: f64, lmax: f64, center_scale: f64) -> (Quadratic, Vector) {
    let g = spd_with_spectrum(rng, d, lmin, lmax);
    let c = gaussian_vector(rng, d) * center_scale;
    (Quadratic::centered(g, &c).expect("symmetrized"), c)
}
