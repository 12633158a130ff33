use std::sync::Arc;

use core_oracles::random::{gaussian_vector, random_quadratic};
use core_oracles::seed::rng_from;
use core_oracles::*;
use fgnrd_engine::*;

fn max_dev(a: &[Vector], b: &[Vector]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn check(name: &str, constrained: bool, psi: Psi) {
    for seed in 0..10u64 {
        let mut rng = rng_from(1000 + seed);
        let d = 5;
        let (q, _) = random_quadratic(&mut rng, d, 0.1, 2.0, 2.0);
        let l = q.smoothness();
        let set: Arc<dyn FeasibleSet> = if constrained {
            Arc::new(L2Ball::unit(d))
        } else {
            Arc::new(Unconstrained::new(d))
        };
        let x0 = set.project(&(gaussian_vector(&mut rng, d) * 0.5)).unwrap();
        let params = PresetParams {
            smoothness: l,
            psi: psi,
            x0: Some(x0.iter().cloned().collect()),
            t_max: 200,
            ..Default::default()
        };
        let cfg = preset(name, &params).unwrap().game().unwrap();
        let f: Arc<dyn ObjectiveOracle> = Arc::new(q.clone());
        let out = run_dynamics(&cfg, &Problem::new(f, set.clone())).unwrap();
        let reference = reference_iterative(name, &params, &q, set.as_ref(), 200, &x0).unwrap();
        let dev = max_dev(&out.x_bar_path, &reference.iterates);
        assert!(dev <= 1e-8, "{name} seed {seed}: deviation {dev:e}");
    }
}

#[test]
fn frank_wolfe_matches_iterative() {
    check("frank_wolfe", true, Psi::Zero);
}

#[test]
fn nesterov_1mem_matches_iterative() {
    check("nesterov_1mem", true, Psi::Zero);
}

#[test]
fn nesterov_infmem_matches_iterative() {
    check("nesterov_infmem", true, Psi::Zero);
}

#[test]
fn nesterov_first_matches_iterative() {
    check("nesterov_first", false, Psi::Zero);
}

#[test]
fn heavy_ball_matches_iterative() {
    check("heavy_ball", false, Psi::Zero);
}

#[test]
fn accel_prox_matches_iterative() {
    check("accel_prox", false, Psi::L1(0.05));
}

#[test]
fn nesterov_first_stationary_start() {
    let q = Quadratic::centered(
        Matrix::identity(3, 3),
        &Vector::from_row_slice(&[1.0, 2.0, 3.0]),
    )
    .unwrap();
    let z0 = Vector::from_row_slice(&[1.0, 2.0, 3.0]);
    let run = reference_iterative(
        "nesterov_first",
        &PresetParams::default(),
        &q,
        &Unconstrained::new(3),
        20,
        &z0,
    )
    .unwrap();
    assert!(run.iterates.iter().all(|w| *w == z0));
}

#[test]
fn heavy_ball_game_matches_expansion_with_printed_box_mismatch() {
    // the momentum coefficient implied by the game is (t−2)/(t+1); the
    // (t−1)/(t+2) variant departs from the game iterates
    let mut rng = rng_from(77);
    let (q, _) = random_quadratic(&mut rng, 4, 0.1, 1.0, 1.0);
    let x0 = gaussian_vector(&mut rng, 4);
    let l = q.smoothness();
    let params = PresetParams {
        smoothness: l,
        x0: Some(x0.iter().cloned().collect()),
        t_max: 50,
        ..Default::default()
    };
    let cfg = preset("heavy_ball", &params).unwrap().game().unwrap();
    let out = run_dynamics(
        &cfg,
        &Problem::new(Arc::new(q.clone()), Arc::new(Unconstrained::new(4))),
    )
    .unwrap();
    let (mut w1, mut w2) = (x0.clone(), x0.clone());
    let mut dev_box: f64 = 0.0;
    for t in 1..=50 {
        let tf = t as f64;
        let w = &w1 - q.gradient(&w1) * (tf / (2.0 * (tf + 1.0) * l))
            + (&w1 - &w2) * ((tf - 1.0) / (tf + 2.0));
        dev_box = dev_box.max((&w - &out.x_bar_path[t - 1]).norm());
        w2 = std::mem::replace(&mut w1, w);
    }
    assert!(dev_box > 1e-6);
}
