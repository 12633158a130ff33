use core_oracles::seed::rng_from;
use core_oracles::{Matrix, Vector};
use momentum::*;
use proptest::prelude::{prop_assert, proptest};

#[test]
fn c0_for_unit_condition_number() {
    assert!((h(0.25, 1.0) - 0.9375).abs() < 1e-15);
    let expected = 2f64.sqrt() * 1.25 / 0.9375f64.sqrt();
    let c0 = c0_constant(0.25, 1.0, 1.0).unwrap();
    assert!((c0 - expected).abs() < 1e-14);
    assert!((c0 - 1.8257).abs() < 1e-3);
}

#[test]
fn corollary_tuning_bound() {
    for kappa in [1.0, 10.0, 100.0, 1e4] {
        let p = tuned_params(ProblemKind::Quadratic { lambda_min: 1.0, lambda_max: kappa }).unwrap();
        let c0 = c0_constant(p.beta, p.eta, p.eta * kappa).unwrap();
        assert!(c0 >= 1.0 && c0 <= 4.0 * kappa.sqrt(), "κ = {kappa}: C₀ = {c0}");
    }
    let p = tuned_params(ProblemKind::Quadratic { lambda_min: 1.0, lambda_max: 100.0 }).unwrap();
    assert!(c0_constant(p.beta, p.eta, 1.0).unwrap() <= 40.0);
}

#[test]
fn inadmissible_momentum_rejected() {
    match c0_constant(0.1, 0.25, 1.0) {
        Err(MomentumError::Inadmissible { beta, low, high }) => {
            assert_eq!(beta, 0.1);
            assert!((low - 0.25).abs() < 1e-15);
            assert_eq!(high, 0.0);
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(c0_constant(1.1, 0.25, 1.0).is_err());
    assert!(c0_constant(0.5, 1.0, 0.5).is_err());
}

#[test]
fn certificate_bound_decays_at_sqrt_beta() {
    let cert = ResidualBoundCert::new(0.01, 0.9025, 1.0, 100.0).unwrap();
    assert_eq!(cert.kappa, 100.0);
    assert!((cert.theta - 0.95).abs() < 1e-15);
    assert!((cert.bound(2, 3.0) - 0.9025 * cert.c0 * 3.0).abs() < 1e-12);
}

#[test]
fn residual_matrix_blocks() {
    let hm = Matrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
    let a = residual_matrix(&hm, 0.1, 0.5);
    let expected = Matrix::from_row_slice(
        4,
        4,
        &[1.3, -0.1, -0.5, 0.0, -0.1, 1.2, 0.0, -0.5, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
    );
    assert!((a - expected).amax() < 1e-15);
}

#[test]
fn akv_scalar_oracle() {
    // H = λI in 3 dimensions with v₀ stacking the same direction: each
    // coordinate follows the scalar recurrence x_{k+1} = (1+β−ηλ)x_k − βx_{k−1}
    let (lambda, eta, beta) = (2.0, 0.3, 0.4);
    let hm = Matrix::identity(3, 3) * lambda;
    let dir = Vector::from_vec(vec![1.0, -2.0, 0.5]);
    let (p, q) = (1.0, 0.7);
    let v0 = Vector::from_iterator(6, dir.iter().map(|d| d * p).chain(dir.iter().map(|d| d * q)));
    let check = akv_bound_check(&hm, &v0, eta, beta, 60).unwrap();
    assert!(check.holds && check.max_ratio <= 1.0);
    let c0 = c0_constant(beta, eta * lambda, eta * lambda).unwrap();
    assert_eq!(check.c0, c0);
    let a = residual_matrix(&hm, eta, beta);
    let (mut x, mut y) = (p, q);
    let mut v = v0.clone();
    for _ in 0..60 {
        let nx = (1.0 + beta - eta * lambda) * x - beta * y;
        y = x;
        x = nx;
        v = &a * &v;
    }
    assert!(((x * x + y * y).sqrt() * dir.norm() - v.norm()).abs() < 1e-12);
}

#[test]
fn akv_ratio_at_k_zero() {
    let hm = Matrix::identity(2, 2);
    let v0 = Vector::from_vec(vec![1.0, 2.0, 3.0, 4.0]);
    let check = akv_bound_check(&hm, &v0, 1.0, 0.25, 0).unwrap();
    assert!((check.max_ratio - 1.0 / check.c0).abs() < 1e-15);
}

/// The suite used by the acceptance report.
#[test]
fn akv_random_suite_with_valid_constant() {
    let mut rng = rng_from(77);
    for _ in 0..100 {
        let c = akv_random_case(&mut rng);
        let check = akv_bound_check(&c.h, &c.v0, c.eta, c.beta, 200).unwrap();
        assert!(check.holds_valid, "ratio {} at k = {}", check.max_ratio_valid, check.worst_k);
    }
}

#[test]
fn stated_constant_can_be_exceeded() {
    // single block z = 0.261, β = 0.928: the eigenbasis condition number
    // 3.72 exceeds the stated C₀ = 2.82 but not 2(β + 1)/√h = 3.99
    let (z, beta) = (0.2609665877586507, 0.9282426619078417);
    let c0 = c0_constant(beta, z, z).unwrap();
    let exact = block_condition(beta, z);
    assert!(exact > 1.3 * c0 && exact <= c0_valid(beta, z, z).unwrap());
    let a = Matrix::from_row_slice(2, 2, &[1.0 + beta - z, -beta, 1.0, 0.0]);
    let mut p = Matrix::identity(2, 2);
    let mut sup = 0.0f64;
    for k in 1..=2000 {
        p = &a * &p;
        sup = sup.max(p.singular_values()[0] / beta.sqrt().powi(k));
    }
    assert!(sup > c0 && sup <= exact * (1.0 + 1e-9), "sup {sup}, exact {exact}");
    assert!((sup - exact).abs() < 1e-3 * exact);
}

proptest! {
    #[test]
    fn block_condition_between_stated_and_valid(z in 1e-3f64..3.9, u in 0.01f64..0.99) {
        let (low, _) = admissibility_thresholds(z, z);
        let beta = low + (1.0 - low) * u;
        let exact = block_condition(beta, z);
        prop_assert!(exact >= 1.0 - 1e-12);
        prop_assert!(exact <= c0_valid(beta, z, z).unwrap() * (1.0 + 1e-12));
    }
}

#[test]
fn akv_rejects_bad_input() {
    let hm = Matrix::identity(2, 2);
    assert!(matches!(akv_bound_check(&hm, &Vector::zeros(3), 1.0, 0.5, 5), Err(MomentumError::Shape(_))));
    let indefinite = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    assert!(akv_bound_check(&indefinite, &Vector::zeros(4), 0.1, 0.5, 5).is_err());
    assert!(matches!(akv_bound_check(&hm, &Vector::zeros(4), 0.25, 0.1, 5), Err(MomentumError::Inadmissible { .. })));
}

#[test]
fn tuned_parameter_examples() {
    let p = tuned_params(ProblemKind::Quadratic { lambda_min: 1.0, lambda_max: 100.0 }).unwrap();
    assert!((p.eta - 0.01).abs() < 1e-15 && (p.beta - 0.9025).abs() < 1e-15);
    let p = tuned_params(ProblemKind::Relu { lambda_min: 0.5, lambda_max: 0.5 }).unwrap();
    assert_eq!(p.beta, 0.25);
    assert_eq!(p.eta, 2.0);
    let p = tuned_params(ProblemKind::DeepLinear { d_y: 4, depth: 10, sigma2_max: 2.0, sigma2_min: 0.5 }).unwrap();
    assert!((p.eta - 0.2).abs() < 1e-15);
    assert_eq!(p.kappa, 4.0);
    assert!((p.beta - 0.5625).abs() < 1e-15);
    assert!(matches!(
        tuned_params(ProblemKind::Quadratic { lambda_min: 2.0, lambda_max: 1.0 }),
        Err(MomentumError::KappaBelowOne(_))
    ));
    assert!(tuned_params(ProblemKind::Quadratic { lambda_min: 0.0, lambda_max: 1.0 }).is_err());
}

proptest! {
    #[test]
    fn c0_at_least_one(zmin in 1e-4f64..1.0, spread in 1.0f64..4.0, u in 0.001f64..0.999) {
        let zmax = (zmin * spread).min(3.9);
        let (low, high) = admissibility_thresholds(zmin, zmax);
        let floor = low.max(high);
        let beta = floor + (1.0 - floor) * u;
        let c0 = c0_constant(beta, zmin, zmax).unwrap();
        prop_assert!(c0 >= 1.0 - 1e-12);
    }

    #[test]
    fn corollary_bound_over_kappa(kappa in 1.0f64..1e5) {
        let p = tuned_params(ProblemKind::Quadratic { lambda_min: 1.0, lambda_max: kappa }).unwrap();
        let c0 = c0_constant(p.beta, p.eta, p.eta * kappa).unwrap();
        prop_assert!(c0 <= 4.0 * kappa.sqrt() * (1.0 + 1e-12));
    }
}
