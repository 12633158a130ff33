use std::sync::Arc;

use core_oracles::random::{gaussian_vector, random_quadratic, spd_with_spectrum};
use core_oracles::seed::rng_from;
use core_oracles::*;
use learners::*;
use nalgebra::dvector;

fn half_sq(d: usize) -> Arc<dyn ObjectiveOracle> {
    Arc::new(make_quadratic(Matrix::identity(d, d), Vector::zeros(d)).unwrap())
}

fn ball(d: usize) -> Arc<dyn FeasibleSet> {
    Arc::new(L2Ball::unit(d))
}

#[test]
fn fenchel_ftl_is_gradient_at_average() {
    let mut s = LearnerState::over_gradients(Strategy::Ftl, half_sq(2), Vector::zeros(2)).unwrap();
    s.act(1.0, None, None).unwrap();
    s.observe(1.0, LossDescriptor::FenchelY { x: dvector![3.0, 1.0] }).unwrap();
    s.act(1.0, None, None).unwrap();
    s.observe(1.0, LossDescriptor::FenchelY { x: dvector![1.0, 1.0] }).unwrap();
    let y = s.act(1.0, None, None).unwrap();
    assert!((y - dvector![2.0, 1.0]).norm() < 1e-15);
}

#[test]
fn simplex_ftl_tie_break() {
    let simplex: Arc<dyn FeasibleSet> = Arc::new(Simplex::new(2));
    let mut s = LearnerState::over_set(Strategy::Ftl, simplex, dvector![0.5, 0.5]).unwrap();
    for theta in [dvector![1.0, 0.0], dvector![0.0, 1.0]] {
        s.act(1.0, None, None).unwrap();
        s.observe(1.0, LossDescriptor::Linear(theta)).unwrap();
    }
    assert_eq!(ftl_step(&s).unwrap(), dvector![1.0, 0.0]);
}

#[test]
fn constant_linear_loss_on_ball_has_zero_regret() {
    let theta = dvector![3.0, -4.0];
    let star: Vector = -&theta / theta.norm();
    let mut s = LearnerState::over_set(Strategy::Ftl, ball(2), star.clone()).unwrap();
    for _ in 0..20 {
        let z = s.act(1.0, None, None).unwrap();
        assert!((&z - &star).norm() < 1e-15);
        s.observe(1.0, LossDescriptor::Linear(theta.clone())).unwrap();
    }
    assert!(weighted_regret(&s, &star).unwrap().abs() < 1e-12);
}

#[test]
fn unbounded_linear_ftl_rejected() {
    let free: Arc<dyn FeasibleSet> = Arc::new(Unconstrained::new(2));
    let mut s = LearnerState::over_set(Strategy::FtlPlus, free, Vector::zeros(2)).unwrap();
    let err = s.act(1.0, Some(&LossDescriptor::Linear(dvector![1.0, 0.0])), None).unwrap_err();
    assert_eq!(err, LearnerError::Unbounded);
}

#[test]
fn optimistic_ftl_examples() {
    // α_t = t, x0 = x1 = (1,0): x̃_2 = (2·x1 + 1·x1)/3 = (1,0).
    let mut s = LearnerState::over_gradients(Strategy::OptimisticFtl, half_sq(2), Vector::zeros(2)).unwrap();
    let x0 = dvector![1.0, 0.0];
    let y1 = s.act(1.0, None, Some(&LossDescriptor::FenchelY { x: x0.clone() })).unwrap();
    assert_eq!(y1, x0);
    s.observe(1.0, LossDescriptor::FenchelY { x: x0.clone() }).unwrap();
    let y2 = s.act(2.0, None, Some(&LossDescriptor::FenchelY { x: x0.clone() })).unwrap();
    assert!((y2 - dvector![1.0, 0.0]).norm() < 1e-15);

    // 1-D: history x = (1, 3) with α = (1, 2), hint ℓ_2 with α_3 = 3.
    let mut s = LearnerState::over_gradients(Strategy::OptimisticFtl, half_sq(1), Vector::zeros(1)).unwrap();
    s.act(1.0, None, Some(&LossDescriptor::FenchelY { x: dvector![0.0] })).unwrap();
    s.observe(1.0, LossDescriptor::FenchelY { x: dvector![1.0] }).unwrap();
    s.act(2.0, None, Some(&LossDescriptor::FenchelY { x: dvector![1.0] })).unwrap();
    s.observe(2.0, LossDescriptor::FenchelY { x: dvector![3.0] }).unwrap();
    let y = s.act(3.0, None, Some(&LossDescriptor::FenchelY { x: dvector![3.0] })).unwrap();
    assert!((y[0] - (1.0 + 6.0 + 9.0) / 6.0).abs() < 1e-15);

    let mut s = LearnerState::over_gradients(Strategy::OptimisticFtl, half_sq(1), Vector::zeros(1)).unwrap();
    assert_eq!(s.act(1.0, None, None).unwrap_err(), LearnerError::NeedsHint);
}

#[test]
fn optimistic_with_true_loss_is_ftl_plus() {
    let mut rng = rng_from(3);
    let (q, _) = random_quadratic(&mut rng, 3, 1.0, 5.0, 1.0);
    let f: Arc<dyn ObjectiveOracle> = Arc::new(q);
    let mut a = LearnerState::over_gradients(Strategy::OptimisticFtl, f.clone(), Vector::zeros(3)).unwrap();
    let mut b = LearnerState::over_gradients(Strategy::FtlPlus, f, Vector::zeros(3)).unwrap();
    for t in 1..=30 {
        let alpha = t as f64;
        let loss = LossDescriptor::FenchelY { x: gaussian_vector(&mut rng, 3) };
        let ya = a.act(alpha, None, Some(&loss)).unwrap();
        let yb = b.act(alpha, Some(&loss), None).unwrap();
        assert_eq!(ya, yb);
        a.observe(alpha, loss.clone()).unwrap();
        b.observe(alpha, loss).unwrap();
    }
}

#[test]
fn ftrl_plus_examples() {
    let free: Arc<dyn FeasibleSet> = Arc::new(Unconstrained::new(2));
    let eta = 0.3;
    let strat = Strategy::FtrlPlus { reg: Regularizer::HalfSqNorm, eta };
    let mut s = LearnerState::over_set(strat, free.clone(), Vector::zeros(2)).unwrap();
    let mut sum = Vector::zeros(2);
    let mut rng = rng_from(4);
    for t in 1..=10 {
        let theta = gaussian_vector(&mut rng, 2);
        let alpha = t as f64;
        sum += &theta * alpha;
        let loss = LossDescriptor::Linear(theta);
        let z = s.act(alpha, Some(&loss), None).unwrap();
        assert!((z - &sum * (-eta)).norm() < 1e-12);
        s.observe(alpha, loss).unwrap();
    }
    let fresh = LearnerState::over_set(Strategy::Ftrl { reg: Regularizer::HalfSqDist(vec![0.2, 0.1]), eta }, free.clone(), Vector::zeros(2));
    let mut fresh = fresh.unwrap();
    assert!((fresh.act(1.0, None, None).unwrap() - dvector![0.2, 0.1]).norm() < 1e-15);
    assert!(matches!(
        LearnerState::over_set(Strategy::FtrlPlus { reg: Regularizer::HalfSqNorm, eta: 0.0 }, free, Vector::zeros(2)),
        Err(LearnerError::NonPositiveStep(..))
    ));
}

#[test]
fn best_response_examples() {
    let s = LearnerState::over_set(Strategy::BestResp, ball(2), Vector::zeros(2)).unwrap();
    let y = dvector![3.0, 4.0];
    assert!((best_resp_step(&s, &LossDescriptor::Linear(y.clone())).unwrap() - dvector![-0.6, -0.8]).norm() < 1e-15);
    let free: Arc<dyn FeasibleSet> = Arc::new(Unconstrained::new(2));
    let s = LearnerState::over_set(Strategy::BestResp, free, Vector::zeros(2)).unwrap();
    let z = best_resp_step(&s, &LossDescriptor::Composite { theta: y.clone(), psi: Psi::HalfSq(1.0) }).unwrap();
    assert!((z + y).norm() < 1e-15);

    let mut rng = rng_from(5);
    let mut s = LearnerState::over_set(Strategy::BestResp, ball(3), Vector::zeros(3)).unwrap();
    for _ in 0..50 {
        let loss = LossDescriptor::Linear(gaussian_vector(&mut rng, 3));
        s.act(1.0, Some(&loss), None).unwrap();
        s.observe(1.0, loss).unwrap();
    }
    assert!(s.regret_vs_best().unwrap() <= 1e-12);
}

#[test]
fn omd_plus_examples() {
    let free: Arc<dyn FeasibleSet> = Arc::new(Unconstrained::new(2));
    let s = LearnerState::over_set(
        Strategy::OmdPlus { geometry: BregmanGeometry::Euclidean, gamma: 0.5 },
        free.clone(),
        dvector![1.0, 0.0],
    )
    .unwrap();
    let z = omd_plus_step(&s, 1.0, &LossDescriptor::Linear(dvector![1.0, 0.0]), &BregmanGeometry::Euclidean, 0.5).unwrap();
    assert!((z - dvector![0.5, 0.0]).norm() < 1e-15);
    let z = omd_plus_step(&s, 1.0, &LossDescriptor::Linear(dvector![7.0, -3.0]), &BregmanGeometry::Euclidean, 1e-12).unwrap();
    assert!((z - dvector![1.0, 0.0]).norm() < 1e-9);

    // composite l1: prox_{αγc}(z - αγθ)
    let (alpha, gamma, c) = (2.0, 0.25, 0.3);
    let prev = dvector![1.0, -0.2];
    let theta = dvector![0.4, 0.1];
    let s = LearnerState::over_set(Strategy::OmdPlus { geometry: BregmanGeometry::Euclidean, gamma }, free, prev.clone()).unwrap();
    let z = omd_plus_step(&s, alpha, &LossDescriptor::Composite { theta: theta.clone(), psi: Psi::L1(c) }, &BregmanGeometry::Euclidean, gamma)
        .unwrap();
    let expect = prox_l1(&(&prev - &theta * (alpha * gamma)), alpha * gamma * c);
    assert!((z - expect).norm() < 1e-14);

    let simplex: Arc<dyn FeasibleSet> = Arc::new(Simplex::new(2));
    let err = LearnerState::over_set(Strategy::OmdPlus { geometry: BregmanGeometry::NegEntropy, gamma: 1.0 }, simplex, dvector![1.0, 0.0]);
    assert!(matches!(err, Err(LearnerError::Oracle(OracleError::NonDifferentiable(_)))));
}

#[test]
fn ftpl_examples() {
    let mut rng = rng_from(6);
    let thetas: Vec<Vector> = (0..5).map(|_| gaussian_vector(&mut rng, 3)).collect();
    let mut a = LearnerState::over_set(Strategy::Ftpl { noise_scale: 0.0, n_samples: 8, seed: 1 }, ball(3), Vector::zeros(3)).unwrap();
    let mut b = LearnerState::over_set(Strategy::Ftl, ball(3), Vector::zeros(3)).unwrap();
    for th in &thetas {
        assert_eq!(a.act(1.0, None, None).unwrap(), b.act(1.0, None, None).unwrap());
        a.observe(1.0, LossDescriptor::Linear(th.clone())).unwrap();
        b.observe(1.0, LossDescriptor::Linear(th.clone())).unwrap();
    }

    // No losses over a symmetric set: the expected action is the center.
    let n = 10_000;
    let s = LearnerState::over_set(Strategy::Ftpl { noise_scale: 1.0, n_samples: n, seed: 9 }, ball(3), Vector::zeros(3)).unwrap();
    let mean = ftpl_step(&s, 1.0, n, 9).unwrap();
    // each coordinate of lmo(ξ) = -ξ/‖ξ‖ has standard deviation 1/√3
    let band = 3.0 * (1.0 / 3.0f64).sqrt() / (n as f64).sqrt();
    assert!(mean.iter().all(|m| m.abs() <= band), "{mean}");

    let one = ftpl_step(&s, 1.0, 1, 42).unwrap();
    assert_eq!(one, ftpl_step(&s, 1.0, 1, 42).unwrap());
}

#[test]
fn ftl_regret_within_lemma_bound() {
    // 1-strongly convex quadratic losses, unconstrained, α_t = t.
    let mut rng = rng_from(7);
    let free: Arc<dyn FeasibleSet> = Arc::new(Unconstrained::new(3));
    let mut s = LearnerState::over_set(Strategy::Ftl, free, Vector::zeros(3)).unwrap();
    let mut bound = 0.0;
    let mut a_sum = 0.0;
    for t in 1..=100 {
        let alpha = t as f64;
        let q = spd_with_spectrum(&mut rng, 3, 1.0, 4.0);
        let loss = LossDescriptor::Quadratic { q, theta: gaussian_vector(&mut rng, 3) };
        let z = s.act(alpha, None, None).unwrap();
        a_sum += alpha;
        bound += 2.0 * alpha * alpha * loss.gradient(&z).unwrap().norm_squared() / a_sum;
        s.observe(alpha, loss).unwrap();
    }
    let reg = s.regret_vs_best().unwrap();
    assert!(reg <= bound, "{reg} > {bound}");
}

#[test]
fn fenchel_ftl_matches_generic_argmin_on_quadratics() {
    let mut rng = rng_from(8);
    let (q, _) = random_quadratic(&mut rng, 3, 0.5, 6.0, 1.0);
    let ginv = q.gamma().clone().try_inverse().unwrap();
    let gb = &ginv * q.linear_term();
    let f: Arc<dyn ObjectiveOracle> = Arc::new(q);
    let mut fen = LearnerState::over_gradients(Strategy::Ftl, f, Vector::zeros(3)).unwrap();
    // f*(y) - ⟨x, y⟩ = ½ yᵀΓ⁻¹y - ⟨Γ⁻¹b + x, y⟩ + const
    let free: Arc<dyn FeasibleSet> = Arc::new(Unconstrained::new(3));
    let mut gen = LearnerState::over_set(Strategy::Ftl, free, Vector::zeros(3)).unwrap();
    for t in 1..=20 {
        let alpha = t as f64;
        let x = gaussian_vector(&mut rng, 3);
        let y1 = fen.act(alpha, None, None).unwrap();
        let y2 = gen.act(alpha, None, None).unwrap();
        if t > 1 {
            assert!((&y1 - &y2).norm() < 1e-9 * (1.0 + y1.norm()));
        }
        fen.observe(alpha, LossDescriptor::FenchelY { x: x.clone() }).unwrap();
        gen.observe(alpha, LossDescriptor::Quadratic { q: ginv.clone(), theta: -(&gb + x) }).unwrap();
    }
}
