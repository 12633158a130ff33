//! Dense linear algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Symmetric eigendecomposition with eigenvalues sorted ascending and the
/// eigenvector columns permuted to match.
pub fn sym_eigen_sorted(m: &Matrix) -> (Vector, Matrix) {
    let eig = SymmetricEigen::new(m.clone());
    let n = m.nrows();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = Vector::from_iterator(n, idx.iter().map(|&i| eig.eigenvalues[i]));
    let mut vecs = Matrix::zeros(n, n);
    for (k, &i) in idx.iter().enumerate() {
        vecs.set_column(k, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Extreme eigenvalues (min, max) of a symmetric matrix.
pub fn sym_extreme_eigenvalues(m: &Matrix) -> (f64, f64) {
    let eig = SymmetricEigen::new(m.clone());
    let lo = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Singular values in descending order.
pub fn singular_values(m: &Matrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().cloned().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn spectral_norm(m: &Matrix) -> f64 {
    singular_values(m).first().cloned().unwrap_or(0.0)
}

pub fn nuclear_norm(m: &Matrix) -> f64 {
    singular_values(m).iter().sum()
}

/// Top singular pair `(sigma, u, v)`. Ties resolve to the lowest index in
/// nalgebra's output ordering; the sign is normalized so that the largest
/// magnitude entry of `u` is positive.
pub fn top_singular_pair(m: &Matrix) -> (f64, Vector, Vector) {
    let svd = m.clone().svd(true, true);
    let u = svd.u.as_ref().expect("u requested");
    let vt = svd.v_t.as_ref().expect("v_t requested");
    let mut best = 0;
    for i in 1..svd.singular_values.len() {
        if svd.singular_values[i] > svd.singular_values[best] {
            best = i;
        }
    }
    let mut uu: Vector = u.column(best).into_owned();
    let mut vv: Vector = vt.row(best).transpose().into_owned();
    let mut piv = 0;
    for i in 1..uu.len() {
        if uu[i].abs() > uu[piv].abs() + 1e-14 {
            piv = i;
        }
    }
    if !uu.is_empty() && uu[piv] < 0.0 {
        uu = -uu;
        vv = -vv;
    }
    (svd.singular_values[best], uu, vv)
}

/// Largest absolute deviation from symmetry.
pub fn asymmetry(m: &Matrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Euclidean projection of a vector onto `{x >= 0, sum x = s}`.
pub fn project_simplex(v: &Vector, s: f64) -> Vector {
    let mut u: Vec<f64> = v.iter().cloned().collect();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut tau = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        cum += uk;
        let cand = (cum - s) / (k as f64 + 1.0);
        if uk - cand > 0.0 {
            tau = cand;
        }
    }
    v.map(|x| (x - tau).max(0.0))
}

/// Euclidean projection onto the l1 ball of radius `r`.
pub fn project_l1_ball(v: &Vector, r: f64) -> Vector {
    if v.iter().map(|x| x.abs()).sum::<f64>() <= r {
        return v.clone();
    }
    let mag = v.map(f64::abs);
    let p = project_simplex(&mag, r);
    Vector::from_iterator(v.len(), v.iter().zip(p.iter()).map(|(x, q)| x.signum() * q))
}
