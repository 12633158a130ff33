use core_oracles::random::gaussian_vector;
use core_oracles::seed::rng_from;
use core_oracles::{FiniteSum, Matrix, ObjectiveOracle, Vector};
use proptest::prelude::{prop_assert, proptest};
use saddle::{overparam_phase_objective, phase_retrieval_objective, toy_saddle_objective, OverParamPhase};

fn fd_gradient(f: &dyn ObjectiveOracle, w: &Vector) -> Vector {
    let h = 1e-6;
    Vector::from_fn(w.len(), |i, _| {
        let mut p = w.clone();
        let mut m = w.clone();
        p[i] += h;
        m[i] -= h;
        (f.value(&p) - f.value(&m)) / (2.0 * h)
    })
}

fn fd_hessian(f: &dyn ObjectiveOracle, w: &Vector) -> Matrix {
    let h = 1e-5;
    let d = w.len();
    let mut out = Matrix::zeros(d, d);
    for j in 0..d {
        let mut p = w.clone();
        let mut m = w.clone();
        p[j] += h;
        m[j] -= h;
        out.set_column(j, &((f.gradient(&p) - f.gradient(&m)) / (2.0 * h)));
    }
    out
}

fn rel(a: &Vector, b: &Vector) -> f64 {
    (a - b).norm() / b.norm().max(1e-12)
}

fn component_mean(f: &dyn FiniteSum, w: &Vector) -> Vector {
    let n = f.n_components();
    let mut acc = Vector::zeros(w.len());
    for i in 0..n {
        acc += f.component_gradient(i, w);
    }
    acc / n as f64
}

#[test]
fn toy_origin_values() {
    let f = toy_saddle_objective(10, 3);
    let z = Vector::zeros(2);
    assert_eq!(f.value(&z), 0.0);
    assert_eq!(f.gradient(&z), f.mean_offset().clone());
    let h = f.hessian(&z).unwrap();
    assert_eq!(h, Matrix::from_diagonal(&Vector::from_vec(vec![1.0, -0.1])));
}

#[test]
fn toy_offsets_have_the_stated_scale() {
    let f = toy_saddle_objective(20_000, 1);
    let n = f.offsets().len() as f64;
    let var = |j: usize| f.offsets().iter().map(|b| b[j] * b[j]).sum::<f64>() / n;
    assert!((var(0) / 0.1 - 1.0).abs() < 0.05, "{}", var(0));
    assert!((var(1) / 0.001 - 1.0).abs() < 0.05, "{}", var(1));
}

#[test]
fn toy_gradient_and_hessian_match_finite_differences() {
    let f = toy_saddle_objective(10, 0);
    let mut rng = rng_from(5);
    for _ in 0..20 {
        let w = gaussian_vector(&mut rng, 2) * 0.6;
        assert!(rel(&f.gradient(&w), &fd_gradient(&f, &w)) < 1e-6);
        assert!((f.hessian(&w).unwrap() - fd_hessian(&f, &w)).norm() < 1e-5 * (1.0 + f.hessian(&w).unwrap().norm()));
        assert!(rel(&component_mean(&f, &w), &f.gradient(&w)) < 1e-12);
    }
}

#[test]
fn phase_retrieval_zero_at_both_signs() {
    let f = phase_retrieval_objective(200, 10, 0);
    let ws = f.w_star().clone();
    assert!(f.value(&ws) < 1e-24);
    assert!(f.value(&(-&ws)) < 1e-24);
    assert_eq!(f.relative_distance(&ws), 0.0);
    assert_eq!(f.relative_distance(&(-&ws)), 0.0);
    assert!((f.relative_distance(&Vector::zeros(10)) - 1.0).abs() < 1e-15);
}

#[test]
fn phase_retrieval_gradient_matches_finite_differences() {
    let f = phase_retrieval_objective(200, 10, 2);
    let mut rng = rng_from(11);
    for _ in 0..50 {
        let w = gaussian_vector(&mut rng, 10) * (0.1f64).sqrt();
        assert!(rel(&f.gradient(&w), &fd_gradient(&f, &w)) < 1e-5);
    }
    let w = gaussian_vector(&mut rng, 10) * 0.3;
    let h = f.hessian(&w).unwrap();
    assert!((&h - fd_hessian(&f, &w)).norm() < 1e-5 * h.norm());
    assert!(rel(&component_mean(&f, &w), &f.gradient(&w)) < 1e-12);
}

#[test]
fn phase_retrieval_origin_is_a_saddle() {
    let f = phase_retrieval_objective(200, 10, 0);
    let z = Vector::zeros(10);
    assert_eq!(f.gradient(&z).norm(), 0.0);
    let (lo, _) = core_oracles::linalg::sym_extreme_eigenvalues(&f.hessian(&z).unwrap());
    assert!(lo < -1.0);
}

#[test]
fn overparam_optima_and_distance() {
    let f = overparam_phase_objective(3, 10, 200, 4);
    let q = Vector::from_vec(vec![0.6, 0.0, -0.8]);
    let w = OverParamPhase::flatten(&(f.w_star() * q.transpose()));
    assert!(f.value(&w) < 1e-24);
    assert!(f.dist(&w) < 1e-7);
    let q_hat = f.q_star(&f.unflatten(&w));
    assert!((q_hat - &q).norm() < 1e-14);
    assert!(f.dist_ball(&w) < 1e-14);
    let z = Vector::zeros(30);
    assert_eq!(f.q_star(&f.unflatten(&z)), Vector::zeros(3));
    assert!((f.dist(&z) - f.w_star().norm()).abs() < 1e-15);
    assert_eq!(f.dist_ball(&z), 0.0);
}

#[test]
fn overparam_single_neuron_is_a_quarter_of_phase_retrieval() {
    let over = overparam_phase_objective(1, 10, 200, 7);
    let phase = phase_retrieval_objective(200, 10, 7);
    assert_eq!(over.w_star(), phase.w_star());
    let mut rng = rng_from(3);
    for _ in 0..10 {
        let w = gaussian_vector(&mut rng, 10) * 0.4;
        let a = over.value(&w);
        let b = phase.value(&w);
        assert!((4.0 * a - b).abs() <= 1e-12 * b.abs().max(1.0));
        assert!(rel(&(over.gradient(&w) * 4.0), &phase.gradient(&w)) < 1e-12);
    }
}

#[test]
fn overparam_derivatives_match_finite_differences() {
    let f = overparam_phase_objective(3, 4, 30, 1);
    let mut rng = rng_from(9);
    for _ in 0..10 {
        let w = gaussian_vector(&mut rng, 12) * 0.3;
        assert!(rel(&f.gradient(&w), &fd_gradient(&f, &w)) < 1e-5);
        let h = f.hessian(&w).unwrap();
        assert!((&h - fd_hessian(&f, &w)).norm() < 1e-5 * h.norm().max(1.0));
        assert!(rel(&component_mean(&f, &w), &f.gradient(&w)) < 1e-12);
    }
}

proptest! {
    #[test]
    fn exact_distance_never_exceeds_closed_form(seed in 0u64..500, scale in 0.01f64..3.0) {
        let f = overparam_phase_objective(2, 5, 10, 0);
        let w = gaussian_vector(&mut rng_from(seed), 10) * scale;
        let closed = f.dist(&w);
        let ball = f.dist_ball(&w);
        prop_assert!(ball <= closed + 1e-12);
        let p = f.unflatten(&w).transpose() * f.w_star();
        if p.norm() >= f.w_star().norm_squared() {
            prop_assert!((ball - closed).abs() <= 1e-12 * closed.max(1.0));
        }
    }
}
