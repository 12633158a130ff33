use core_oracles::{Matrix, ObjectiveOracle, Vector};
use proptest::prelude::{prop_assert, prop_assert_eq, proptest};
use saddle::*;

fn convex_deterministic() -> ToySaddle {
    let h = Matrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
    let b = Vector::from_vec(vec![0.3, -0.2]);
    ToySaddle::new(h, vec![b.clone(), b])
}

#[test]
fn zero_momentum_without_boost_is_plain_sgd() {
    let f = toy_saddle_objective(10, 0);
    let cfg = SaddleConfig::new(1e-2, 0.0, 500, 42, Vector::from_vec(vec![0.1, -0.2])).without_boost();
    let mut run = Vec::new();
    cnc_sgd_observe(&f, &cfg, |v| {
        run.push(v.w.clone());
        true
    })
    .unwrap();
    let mut w = cfg.w0.clone();
    for (t, wt) in run.iter().enumerate() {
        assert_eq!(&w, wt, "t = {t}");
        let g = f.stochastic_gradient(&w, step_seed(42, t as u64)).unwrap();
        w -= g * 1e-2;
    }
}

#[test]
fn momentum_unrolls_to_a_geometric_sum() {
    let f = toy_saddle_objective(10, 1);
    let beta = 0.9;
    let cfg = SaddleConfig::new(1e-3, beta, 400, 3, Vector::from_vec(vec![0.2, 0.1]));
    let mut gs: Vec<Vector> = Vec::new();
    cnc_sgd_observe(&f, &cfg, |v| {
        gs.push(v.g.clone());
        let mut direct = Vector::zeros(2);
        for (s, g) in gs.iter().enumerate() {
            direct += g * beta.powi((v.t - s as u64) as i32);
        }
        assert!((&direct - v.m).norm() <= 1e-12 * direct.norm().max(1.0), "t = {}", v.t);
        true
    })
    .unwrap();
}

#[test]
fn boosted_step_sizes_follow_the_schedule() {
    let f = toy_saddle_objective(5, 0);
    let cfg = SaddleConfig::new(1e-4, 0.5, 2500, 0, Vector::zeros(2));
    assert_eq!(cfg.r, 1e-3);
    assert_eq!(cfg.t_thred, 1000);
    let mut seen = Vec::new();
    cnc_sgd_observe(&f, &cfg, |v| {
        if v.boosted {
            assert_eq!(v.step, 1e-3);
            seen.push(v.t);
        } else {
            assert_eq!(v.step, 1e-4);
        }
        true
    })
    .unwrap();
    assert_eq!(seen, vec![0, 1000, 2000]);
}

proptest! {
    #[test]
    fn boost_count_matches_floor_formula(t_max in 0u64..3000, t_thred in 1u64..700) {
        let f = toy_saddle_objective(3, 0);
        let cfg = SaddleConfig::new(1e-5, 0.3, t_max, 1, Vector::zeros(2)).with_boost(2e-5, t_thred);
        let run = cnc_sgd_run(&f, &cfg, None).unwrap();
        prop_assert_eq!(run.boosted_steps, t_max / t_thred + 1);
        prop_assert_eq!(run.boosted_steps, cfg.boosted_steps());
        let marks = run.trace.series("boost").iter().filter(|b| **b == Some(1.0)).count() as u64;
        prop_assert_eq!(marks, run.boosted_steps);
        prop_assert_eq!(run.trace.rows.len() as u64, t_max + 2);
    }

    #[test]
    fn noiseless_convex_problem_descends_monotonically(beta in 0.0f64..0.05, x in -0.5f64..0.5, y in -0.5f64..0.5) {
        let f = convex_deterministic();
        let cfg = SaddleConfig::new(1e-2, beta, 300, 0, Vector::from_vec(vec![x, y])).without_boost();
        let run = cnc_sgd_run(&f, &cfg, None).unwrap();
        let vals = run.trace.series("f_value");
        for pair in vals.windows(2) {
            prop_assert!(pair[1].unwrap() <= pair[0].unwrap() + 1e-15);
        }
    }
}

#[test]
fn trace_thinning_keeps_the_last_iterate() {
    let f = toy_saddle_objective(10, 0);
    let cfg = SaddleConfig::new(5e-5, 0.9, 1005, 0, Vector::zeros(2)).with_record_every(100);
    let run = cnc_sgd_run(&f, &cfg, None).unwrap();
    let ts: Vec<u64> = run.trace.rows.iter().map(|r| r.t).collect();
    assert_eq!(ts.first(), Some(&0));
    assert_eq!(ts.last(), Some(&1006));
    assert_eq!(ts.len(), 12);
    assert_eq!(run.trace.rows.last().unwrap().extras[0], None);
    assert!((run.trace.rows.last().unwrap().f_value - f.value(&run.w_final)).abs() == 0.0);
}

#[test]
fn divergence_reports_the_first_bad_iterate() {
    let f = toy_saddle_objective(10, 0);
    let cfg = SaddleConfig::new(0.5, 0.9, 1000, 0, Vector::from_vec(vec![1.0, 1.0])).without_boost();
    let Err(SaddleError::NonFinite { iteration }) = cnc_sgd_run(&f, &cfg, None) else {
        panic!("expected divergence")
    };
    assert!(iteration >= 1);
    let before = SaddleConfig { t_max: iteration - 2, ..cfg.clone() };
    if iteration >= 2 {
        assert!(cnc_sgd_run(&f, &before, None).is_ok());
    }
    let exact = SaddleConfig { t_max: iteration - 1, ..cfg };
    assert_eq!(cnc_sgd_run(&f, &exact, None).unwrap_err(), SaddleError::NonFinite { iteration });
}

#[test]
fn invalid_configurations_are_rejected() {
    let f = toy_saddle_objective(2, 0);
    let base = SaddleConfig::new(1e-3, 0.5, 10, 0, Vector::zeros(2));
    for bad in [
        SaddleConfig { r: 1e-4, ..base.clone() },
        SaddleConfig { beta: 1.0, ..base.clone() },
        SaddleConfig { eta: 0.0, ..base.clone() },
        SaddleConfig { t_thred: 0, ..base.clone() },
        SaddleConfig { record_every: 0, ..base.clone() },
    ] {
        assert!(matches!(cnc_sgd_run(&f, &bad, None), Err(SaddleError::InvalidConfig(_))));
    }
    let wrong_dim = SaddleConfig { w0: Vector::zeros(3), ..base };
    assert!(matches!(cnc_sgd_run(&f, &wrong_dim, None), Err(SaddleError::Shape(_))));
}

#[test]
fn objectives_without_stochastic_gradients_are_rejected() {
    let q = core_oracles::Quadratic::centered(Matrix::identity(2, 2), &Vector::zeros(2)).unwrap();
    let cfg = SaddleConfig::new(1e-3, 0.5, 10, 0, Vector::zeros(2));
    assert_eq!(cnc_sgd_run(&q, &cfg, None).unwrap_err(), SaddleError::NoStochasticGradient);
}

#[test]
fn toy_escape_time_is_ordered_in_beta() {
    let f = toy_saddle_objective(10, 0);
    let times: Vec<u64> = SWEEP_BETAS
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            let cfg = SaddleConfig::new(5e-5, b, 2_000_000, sweep_seed(0, i), Vector::zeros(2)).without_boost();
            escape_time(&f, &cfg, -0.01).unwrap().expect("escapes")
        })
        .collect();
    assert!(times.windows(2).all(|p| p[1] <= p[0]), "{times:?}");
    assert!(times[4] < times[0]);
}

#[test]
fn sweep_matches_serial_runs_in_order() {
    let f = toy_saddle_objective(10, 2);
    let cfg = SaddleConfig::new(5e-4, 0.0, 2000, 9, Vector::zeros(2)).with_record_every(50);
    let metric = |w: &Vector| w.norm();
    let sweep = beta_sweep(&f, &cfg, &SWEEP_BETAS, Some(&metric)).unwrap();
    assert_eq!(sweep.len(), 5);
    for (i, (beta, run)) in sweep.iter().enumerate() {
        assert_eq!(*beta, SWEEP_BETAS[i]);
        let serial = cnc_sgd_run(&f, &SaddleConfig { beta: *beta, seed: sweep_seed(9, i), ..cfg.clone() }, Some(&metric)).unwrap();
        assert_eq!(serial.trace, run.trace);
        assert_eq!(run.trace.rows[3].dist, Some(metric(&{
            let mut w = None;
            cnc_sgd_observe(&f, &SaddleConfig { beta: *beta, seed: sweep_seed(9, i), t_max: 150, ..cfg.clone() }, |v| {
                if v.t == 150 {
                    w = Some(v.w.clone());
                }
                true
            })
            .unwrap();
            w.unwrap()
        })));
    }
}

#[test]
fn phase_retrieval_metrics_are_sign_symmetric() {
    let f = phase_retrieval_objective(200, 10, 0);
    let g = PhaseRetrieval::new(f.design().clone(), -f.w_star());
    let cfg = SaddleConfig::new(5e-4, 0.5, 3000, 1, phase_init(10, 0)).without_boost().with_record_every(10);
    let mf = |w: &Vector| f.relative_distance(w);
    let mg = |w: &Vector| g.relative_distance(w);
    let a = cnc_sgd_run(&f, &cfg, Some(&mf)).unwrap();
    let b = cnc_sgd_run(&g, &cfg, Some(&mg)).unwrap();
    assert_eq!(a.trace, b.trace);
}

#[test]
fn phase_retrieval_momentum_crosses_half_distance_first() {
    let f = phase_retrieval_objective(200, 10, 0);
    let w0 = phase_init(10, 0);
    let cross = |i: usize, beta: f64| {
        let cfg = SaddleConfig::new(5e-4, beta, 100_000, sweep_seed(0, i), w0.clone()).without_boost();
        first_hit(&f, &cfg, |w| f.relative_distance(w) < 0.5).unwrap().expect("crosses")
    };
    assert!(cross(4, 0.9) < cross(0, 0.0));
}
