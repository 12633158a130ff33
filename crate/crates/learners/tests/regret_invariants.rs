use std::sync::Arc;

use core_oracles::random::{gaussian_vector, spd_with_spectrum};
use core_oracles::seed::rng_from;
use core_oracles::*;
use learners::*;
use learners::Strategy;
use proptest::prelude::*;

fn strongly_convex_sequence(seed: u64, d: usize, t: usize) -> Vec<LossDescriptor> {
    let mut rng = rng_from(seed);
    (0..t)
        .map(|_| LossDescriptor::Quadratic { q: spd_with_spectrum(&mut rng, d, 0.5, 3.0), theta: gaussian_vector(&mut rng, d) * 2.0 })
        .collect()
}

fn run_prescient(strategy: Strategy, set: Arc<dyn FeasibleSet>, losses: &[LossDescriptor]) -> LearnerState {
    let d = set.dim();
    let mut s = LearnerState::over_set(strategy, set, Vector::zeros(d)).unwrap();
    for (i, l) in losses.iter().enumerate() {
        let alpha = (i + 1) as f64;
        s.act(alpha, Some(l), None).unwrap();
        s.observe(alpha, l.clone()).unwrap();
    }
    s
}

#[test]
fn best_response_and_ftl_plus_nonpositive_regret() {
    let sets: Vec<Arc<dyn FeasibleSet>> = vec![Arc::new(Unconstrained::new(3)), Arc::new(L2Ball::unit(3))];
    for seed in 0..100u64 {
        let losses = strongly_convex_sequence(seed, 3, 25);
        let set = sets[(seed % 2) as usize].clone();
        for strat in [Strategy::BestResp, Strategy::FtlPlus] {
            let s = run_prescient(strat.clone(), set.clone(), &losses);
            let r = s.regret_vs_best().unwrap();
            assert!(r <= 1e-9, "{} seed {seed}: regret {r}", strat.name());
        }
    }
}

#[test]
fn ftrl_plus_linear_regret_bound() {
    for seed in 0..100u64 {
        let mut rng = rng_from(1000 + seed);
        let set: Arc<dyn FeasibleSet> = Arc::new(L2Ball::new(3, 2.0).unwrap());
        let eta = 0.05 + 0.1 * (seed % 7) as f64;
        let reg = Regularizer::HalfSqNorm;
        let losses: Vec<LossDescriptor> = (0..40).map(|_| LossDescriptor::Linear(gaussian_vector(&mut rng, 3))).collect();
        let s = run_prescient(Strategy::FtrlPlus { reg: reg.clone(), eta }, set.clone(), &losses);
        let star = set.lmo(&s.aggregate().theta);
        let r = weighted_regret(&s, &star).unwrap();
        let z0 = reg.minimizer(set.as_ref()).unwrap();
        let bound = (reg.value(&star, set.as_ref()).unwrap() - reg.value(&z0, set.as_ref()).unwrap()) / eta;
        assert!(r <= bound + 1e-9, "seed {seed}: {r} > {bound}");
    }
}

#[test]
fn omd_plus_regret_matches_lemma() {
    let mut rng = rng_from(77);
    for _ in 0..30 {
        let set: Arc<dyn FeasibleSet> = Arc::new(L2Ball::unit(3));
        let gamma = 0.2;
        let z0 = Vector::zeros(3);
        let mut s = LearnerState::over_set(Strategy::OmdPlus { geometry: BregmanGeometry::Euclidean, gamma }, set.clone(), z0.clone()).unwrap();
        let mut prev = z0.clone();
        let mut movement = 0.0;
        for t in 1..=40 {
            let alpha = t as f64;
            let loss = LossDescriptor::Linear(gaussian_vector(&mut rng, 3));
            let z = s.act(alpha, Some(&loss), None).unwrap();
            movement += (&prev - &z).norm_squared();
            prev = z;
            s.observe(alpha, loss).unwrap();
        }
        let star = set.lmo(&s.aggregate().theta);
        let r = weighted_regret(&s, &star).unwrap();
        let bound = BregmanGeometry::Euclidean.divergence(&z0, &star).unwrap() / gamma - movement / (2.0 * gamma);
        assert!(r <= bound + 1e-9, "{r} > {bound}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn optimistic_ftrl_reductions(seed in 0u64..10_000) {
        let mut rng = rng_from(seed);
        let set: Arc<dyn FeasibleSet> = Arc::new(L2Ball::unit(3));
        let d = 3;
        let eta = 0.7;
        let mut oftrl0 = LearnerState::over_set(Strategy::OptimisticFtrl { reg: Regularizer::Zero, eta }, set.clone(), Vector::zeros(d)).unwrap();
        let mut oftl = LearnerState::over_set(Strategy::OptimisticFtl, set.clone(), Vector::zeros(d)).unwrap();
        let reg = Regularizer::HalfSqNorm;
        let mut oftrl_nohint = LearnerState::over_set(Strategy::OptimisticFtrl { reg: reg.clone(), eta }, set.clone(), Vector::zeros(d)).unwrap();
        let mut ftrl = LearnerState::over_set(Strategy::Ftrl { reg, eta }, set, Vector::zeros(d)).unwrap();
        let mut last = LossDescriptor::Linear(gaussian_vector(&mut rng, d));
        for t in 1..=15 {
            let alpha = t as f64;
            let a = oftrl0.act(alpha, None, Some(&last)).unwrap();
            let b = oftl.act(alpha, None, Some(&last)).unwrap();
            prop_assert!((&a - &b).norm() <= 1e-10);
            let c = oftrl_nohint.act(alpha, None, None).unwrap();
            let e = ftrl.act(alpha, None, None).unwrap();
            prop_assert!((&c - &e).norm() <= 1e-10);
            let loss = LossDescriptor::Linear(gaussian_vector(&mut rng, d));
            for s in [&mut oftrl0, &mut oftl, &mut oftrl_nohint, &mut ftrl] {
                s.observe(alpha, loss.clone()).unwrap();
            }
            last = loss;
        }
    }

    #[test]
    fn actions_stay_feasible(seed in 0u64..10_000) {
        let mut rng = rng_from(seed);
        let set: Arc<dyn FeasibleSet> = Arc::new(Simplex::new(4));
        let strategies = vec![
            Strategy::Ftl,
            Strategy::FtlPlus,
            Strategy::BestResp,
            Strategy::FtrlPlus { reg: Regularizer::HalfSqNorm, eta: 0.5 },
            Strategy::OmdPlus { geometry: BregmanGeometry::Euclidean, gamma: 0.3 },
            Strategy::OmdPlus { geometry: BregmanGeometry::NegEntropy, gamma: 0.3 },
            Strategy::Ftpl { noise_scale: 0.5, n_samples: 4, seed },
        ];
        for strat in strategies {
            let mut s = LearnerState::over_set(strat, set.clone(), set.canonical_point()).unwrap();
            for t in 1..=10 {
                let loss = LossDescriptor::Linear(gaussian_vector(&mut rng, 4));
                let z = s.act(t as f64, Some(&loss), None).unwrap();
                prop_assert!(set.contains(&z, 1e-9));
                s.observe(t as f64, loss).unwrap();
            }
        }
    }
}
