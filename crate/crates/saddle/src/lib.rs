//! Momentum SGD near saddle points.
//!
//! [`cnc_sgd_run`] implements stochastic heavy ball with a step boosted to
//! `r` every `t_thred` iterations. The benchmark objectives have a saddle at
//! or near the origin, and [`diagnostics`] measures how the momentum aligns
//! with the gradient and the negative-curvature direction along a run.

mod config;
pub mod diagnostics;
mod error;
pub mod objectives;
pub mod params;
mod run;

pub use config::{SaddleConfig, DEFAULT_T_THRED};
pub use diagnostics::{cnc_sgd_diagnostics, diagnose, DiagnosticsRow, DiagnosticsSettings};
pub use error::SaddleError;
pub use objectives::{
    overparam_phase_objective, phase_init, phase_retrieval_objective, toy_saddle_objective, OverParamPhase,
    PhaseRetrieval, ToySaddle,
};
pub use run::{beta_sweep, cnc_sgd_observe, cnc_sgd_run, escape_time, first_hit, step_seed, sweep_seed, Metric, SaddleRun, StepView};

/// Momentum values of the escape experiments.
pub const SWEEP_BETAS: [f64; 5] = [0.0, 0.3, 0.5, 0.7, 0.9];
