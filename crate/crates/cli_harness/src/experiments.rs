//! The experiment registry and `run`.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use core_oracles::seed::{derive_seed, digest_hex};
use core_oracles::{FeasibleSet, L2Ball, ObjectiveOracle, Unconstrained, Vector};
use fgnrd_engine::{preset, run_dynamics, PresetParams, Problem};
use momentum::{
    cubic_regularized_experiment, deep_linear_train, quadratic_bound_check, relu_gram, relu_train, tuned_params,
    CubicProblem, DeepLinearData, DeepLinearNet, MomentumConfig, ProblemKind, ReluNet,
};
use projection_free::{boundary_fw, gauge_fw, nuclear_run, GaugeFwConfig, NuclearConfig};
use saddle::{
    cnc_sgd_observe, phase_init, phase_retrieval_objective, sweep_seed, toy_saddle_objective, SaddleConfig, SaddleError,
};
use serde_json::{json, Value};

use crate::criteria::equivalence_deviation;
use crate::instances::*;
use crate::output::{write_atomic, Table};
use crate::spec::{resolve, ExperimentSpec, ParamKind, ParamSpec, Resolved, SpecError};

type Runner = fn(&Resolved, u64) -> Result<Vec<Table>, String>;

pub struct Experiment {
    pub name: &'static str,
    pub about: &'static str,
    pub params: &'static [ParamSpec],
    run: Runner,
}

const fn p(name: &'static str, kind: ParamKind, default: &'static str, help: &'static str) -> ParamSpec {
    ParamSpec { name, kind, default, help }
}

use ParamKind::*;

pub static EXPERIMENTS: &[Experiment] = &[
    Experiment {
        name: "fw_quadratic_ball",
        about: "Frank-Wolfe game on ½‖w − (2,0)‖² over the unit ball",
        params: &[p("t_max", Int, "1000", "rounds")],
        run: fw_quadratic_ball,
    },
    Experiment {
        name: "game_preset",
        about: "any game preset on a seeded quadratic with spectrum [1, kappa]",
        params: &[
            p("preset", Str, "\"nesterov_1mem\"", "preset name"),
            p("set", Str, "\"ball\"", "ball or unconstrained"),
            p("d", Int, "5", "dimension"),
            p("kappa", Float, "20.0", "condition number"),
            p("t_max", Int, "200", "rounds"),
        ],
        run: game_preset,
    },
    Experiment {
        name: "equivalence",
        about: "max deviation between game and classical iterates over 10 quadratics",
        params: &[p("preset", Str, "\"frank_wolfe\"", "preset with a classical form"), p("t_max", Int, "200", "rounds")],
        run: equivalence,
    },
    Experiment {
        name: "accel_linear",
        about: "accelerated linear rate on a strongly convex quadratic",
        params: &[p("kappa", Float, "25.0", "condition number"), p("d", Int, "8", "dimension"), p("t_max", Int, "200", "rounds")],
        run: accel_linear,
    },
    Experiment {
        name: "polyak_quadratic",
        about: "tuned heavy ball on a quadratic against its residual bound",
        params: &[p("kappa", Float, "100.0", "condition number"), p("d", Int, "10", "dimension"), p("t_max", Int, "2000", "iterations")],
        run: polyak_quadratic,
    },
    Experiment {
        name: "relu_ntk",
        about: "one-hidden-layer ReLU network, tuned momentum vs GD",
        params: &[
            p("n", Int, "5", "samples"),
            p("m", Int, "1000", "width"),
            p("d", Int, "10", "input dimension"),
            p("t_max", Int, "200", "iterations"),
        ],
        run: relu_ntk,
    },
    Experiment {
        name: "deep_linear",
        about: "deep linear network (d = 4, m = 16, L = 10), momentum vs GD",
        params: &[p("kappa", Float, "25.0", "data condition number"), p("t_max", Int, "500", "iterations")],
        run: deep_linear,
    },
    Experiment {
        name: "cubic",
        about: "cubic-regularized quadratic, momentum vs GD",
        params: &[p("beta", Float, "0.9", "momentum"), p("eta", Float, "0.01", "step"), p("t_max", Int, "1000", "iterations")],
        run: cubic,
    },
    Experiment {
        name: "gauge_fw",
        about: "gauge Frank-Wolfe on a quadratic over the unit ball",
        params: &[p("t_max", Int, "500", "rounds")],
        run: gauge,
    },
    Experiment {
        name: "boundary_fw",
        about: "boundary Frank-Wolfe on a non-smooth objective over the unit ball",
        params: &[p("t_max", Int, "2000", "rounds")],
        run: boundary,
    },
    Experiment {
        name: "nuclear_completion",
        about: "rank-one matrix completion with the nuclear-norm method",
        params: &[p("n", Int, "10", "matrix size"), p("frac", Float, "0.5", "observed fraction"), p("t_max", Int, "300", "rounds")],
        run: nuclear_completion,
    },
    Experiment {
        name: "saddle_beta_sweep",
        about: "momentum SGD on the toy saddle objective for several β",
        params: &[
            p("n", Int, "10", "components"),
            p("eta", Float, "5e-5", "step"),
            p("t_max", Int, "50000", "iterations"),
            p("record_every", Int, "100", "trace thinning"),
            p("threshold", Float, "-0.01", "escape level"),
            p("betas", FloatList, "[0.0, 0.3, 0.5, 0.7, 0.9]", "momentum values"),
        ],
        run: saddle_sweep,
    },
    Experiment {
        name: "phase_retrieval_sweep",
        about: "momentum SGD on phase retrieval for several β",
        params: &[
            p("n", Int, "200", "samples"),
            p("d", Int, "10", "dimension"),
            p("eta", Float, "5e-4", "step"),
            p("t_max", Int, "20000", "iterations"),
            p("record_every", Int, "100", "trace thinning"),
            p("betas", FloatList, "[0.0, 0.3, 0.5, 0.7, 0.9]", "momentum values"),
        ],
        run: phase_sweep,
    },
];

pub fn find(name: &str) -> Result<&'static Experiment, SpecError> {
    EXPERIMENTS.iter().find(|e| e.name == name).ok_or_else(|| SpecError::UnknownExperiment {
        name: name.to_string(),
        available: EXPERIMENTS.iter().map(|e| e.name.to_string()).collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    pub sidecar: PathBuf,
    pub digest: String,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("experiment failed: {0}")]
    Failed(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

/// Validates the spec, runs it and writes `<name>.csv` (plus
/// `<name>_<stem>.csv` for secondary tables) and `<name>.json`.
pub fn run(spec: &ExperimentSpec, out_dir: &Path) -> Result<RunOutput, RunError> {
    let exp = find(&spec.experiment)?;
    let params = resolve(exp.params, &spec.params)?;
    let canonical = json!({ "experiment": exp.name, "seed": spec.seed, "params": params.0 });
    let digest = digest_hex(canonical.to_string().as_bytes());
    let tables = (exp.run)(&params, spec.seed).map_err(RunError::Failed)?;
    let mut files = Vec::new();
    let mut described = Vec::new();
    for tab in &tables {
        let file = if tab.stem.is_empty() { format!("{}.csv", spec.name) } else { format!("{}_{}.csv", spec.name, tab.stem) };
        let path = out_dir.join(&file);
        write_atomic(&path, tab.to_csv().as_bytes())?;
        described.push(json!({ "file": file, "columns": tab.columns, "rows": tab.rows.len() }));
        files.push(path);
    }
    let sidecar = out_dir.join(format!("{}.json", spec.name));
    let meta = json!({
        "schema_version": spec.schema_version,
        "name": spec.name,
        "experiment": exp.name,
        "seed": spec.seed,
        "params": params.0,
        "config_digest": digest,
        "library_version": env!("CARGO_PKG_VERSION"),
        "files": described,
    });
    write_atomic(&sidecar, serde_json::to_string_pretty(&meta).expect("metadata serializes").as_bytes())?;
    Ok(RunOutput { files, sidecar, digest })
}

/// Runs every registered experiment with default parameters twice into
/// separate directories and compares the bytes of every output file.
/// Returns (identical, files compared, differing file names).
pub fn determinism_check() -> Result<(bool, usize, Vec<String>), RunError> {
    let a = tempfile::tempdir()?;
    let b = tempfile::tempdir()?;
    let mut compared = 0;
    let mut differing = Vec::new();
    for exp in EXPERIMENTS {
        let spec = ExperimentSpec::new(exp.name);
        let ra = run(&spec, a.path())?;
        let rb = run(&spec, b.path())?;
        for (fa, fb) in ra.files.iter().chain([&ra.sidecar]).zip(rb.files.iter().chain([&rb.sidecar])) {
            compared += 1;
            if std::fs::read(fa)? != std::fs::read(fb)? {
                differing.push(fa.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default());
            }
        }
    }
    Ok((differing.is_empty(), compared, differing))
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn game_output(name: &str, params: &PresetParams, f: Arc<dyn ObjectiveOracle>, set: Arc<dyn FeasibleSet>) -> Result<fgnrd_engine::GameOutput, String> {
    let cfg = preset(name, params).map_err(e)?.game().ok_or_else(|| format!("{name} is not a game preset"))?;
    run_dynamics(&cfg, &Problem::new(f, set)).map_err(e)
}

fn fw_quadratic_ball(p: &Resolved, _seed: u64) -> Result<Vec<Table>, String> {
    let (f, set) = fw_ball_problem();
    let out = game_output("frank_wolfe", &PresetParams { t_max: p.int("t_max"), ..Default::default() }, Arc::new(f), Arc::new(set))?;
    Ok(vec![Table::from_trace("", &out.trace, &["f_value", "gap"])])
}

fn game_preset(p: &Resolved, seed: u64) -> Result<Vec<Table>, String> {
    let d = p.int("d");
    let kappa = p.float("kappa");
    let (q, _) = conditioned_quadratic(seed, d, kappa);
    let set: Arc<dyn FeasibleSet> = match p.str("set") {
        "ball" => Arc::new(L2Ball::unit(d)),
        "unconstrained" => Arc::new(Unconstrained::new(d)),
        other => return Err(format!("set must be `ball` or `unconstrained`, got `{other}`")),
    };
    let params = PresetParams { smoothness: kappa, mu: 1.0, t_max: p.int("t_max"), seed, ..Default::default() };
    let out = game_output(p.str("preset"), &params, Arc::new(q), set)?;
    Ok(vec![Table::from_trace("", &out.trace, &["f_value", "gap"])])
}

fn equivalence(p: &Resolved, _seed: u64) -> Result<Vec<Table>, String> {
    let name = p.str("preset");
    let constrained = crate::criteria::EQUIVALENCE_PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, c)| *c)
        .ok_or_else(|| format!("preset `{name}` has no classical form in this experiment"))?;
    let mut tab = Table::new("", &["max_deviation"]);
    let t_max = p.int("t_max");
    for t in [1, 2, 5, 10, 20, 50, 100, 200, 500, 1000].into_iter().filter(|&t| t < t_max).chain([t_max]) {
        tab.push(t as u64, vec![Some(equivalence_deviation(name, constrained, t)?)]);
    }
    Ok(vec![tab])
}

fn accel_linear(p: &Resolved, seed: u64) -> Result<Vec<Table>, String> {
    let (kappa, d) = (p.float("kappa"), p.int("d"));
    let (q, c) = conditioned_quadratic(seed, d, kappa);
    let fstar = q.value(&c);
    let params = PresetParams { smoothness: kappa, mu: 1.0, l_phi: 1.0, t_max: p.int("t_max"), ..Default::default() };
    let out = game_output("accel_linear", &params, Arc::new(q), Arc::new(Unconstrained::new(d)))?;
    let theta = 1.0 / (2.0 * 2f64.sqrt() * kappa.sqrt());
    let c_fit = (out.trace.rows[0].f_value - fstar) / (1.0 - theta);
    let mut tab = Table::new("", &["error", "bound"]);
    for r in &out.trace.rows {
        tab.push(r.t, vec![Some(r.f_value - fstar), Some(c_fit * (1.0 - theta).powi(r.t as i32))]);
    }
    Ok(vec![tab])
}

fn polyak_quadratic(p: &Resolved, seed: u64) -> Result<Vec<Table>, String> {
    let check = quadratic_bound_check(p.float("kappa"), p.int("d"), p.int("t_max"), seed).map_err(e)?;
    Ok(vec![Table::from_trace("", &check.trace, &["log10_residual", "ratio"])])
}

fn relu_ntk(p: &Resolved, seed: u64) -> Result<Vec<Table>, String> {
    let net = ReluNet::random(p.int("n"), p.int("m"), p.int("d"), seed);
    let (lmin, lmax) = core_oracles::linalg::sym_extreme_eigenvalues(&relu_gram(&net, &net.w));
    let tp = tuned_params(ProblemKind::Relu { lambda_min: lmin, lambda_max: lmax }).map_err(e)?;
    let t_max = p.int("t_max");
    let hb = relu_train(&net, tp.eta, tp.beta, t_max).map_err(e)?;
    let gd = relu_train(&net, tp.eta, 0.0, t_max).map_err(e)?;
    let mut tab = Table::new("", &["loss_momentum", "loss_gd", "pattern_change_momentum", "pattern_change_gd"]);
    for (a, b) in hb.trace.rows.iter().zip(&gd.trace.rows) {
        let pc = |tr: &core_oracles::Trace, r| tr.column(r, "pattern_change");
        tab.push(a.t, vec![Some(a.f_value), Some(b.f_value), pc(&hb.trace, a), pc(&gd.trace, b)]);
    }
    Ok(vec![tab])
}

fn deep_linear(p: &Resolved, seed: u64) -> Result<Vec<Table>, String> {
    let data = DeepLinearData::conditioned(4, 4, 4, p.float("kappa"), 0.1, seed).map_err(e)?;
    let net = DeepLinearNet::orthogonal_init(4, 4, 16, 10, seed).map_err(e)?;
    let (s2max, s2min) = data.sigma2_extremes();
    let tp = tuned_params(ProblemKind::DeepLinear { d_y: 4, depth: 10, sigma2_max: s2max, sigma2_min: s2min }).map_err(e)?;
    let t_max = p.int("t_max");
    let hb = deep_linear_train(&net, &data, tp.eta, tp.beta, t_max).map_err(e)?;
    let gd = deep_linear_train(&net, &data, tp.eta, 0.0, t_max).map_err(e)?;
    let mut tab = Table::new("", &["residual_momentum", "residual_gd", "bound"]);
    for (a, b) in hb.trace.rows.iter().zip(&gd.trace.rows) {
        tab.push(a.t, vec![hb.trace.column(a, "residual"), gd.trace.column(b, "residual"), hb.trace.column(a, "bound")]);
    }
    Ok(vec![tab])
}

fn cubic(p: &Resolved, seed: u64) -> Result<Vec<Table>, String> {
    let problem = CubicProblem::reference_instance(seed);
    let w0 = Vector::zeros(problem.a.nrows());
    let t_max = p.int("t_max");
    let eta = p.float("eta");
    let hb = cubic_regularized_experiment(&problem, &MomentumConfig::new(eta, p.float("beta"), w0.clone()).map_err(e)?, t_max).map_err(e)?;
    let gd = cubic_regularized_experiment(&problem, &MomentumConfig::new(eta, 0.0, w0).map_err(e)?, t_max).map_err(e)?;
    let mut tab = Table::new("", &["gap_momentum", "gap_gd"]);
    for (a, b) in hb.trace.rows.iter().zip(&gd.trace.rows) {
        tab.push(a.t, vec![a.gap, b.gap]);
    }
    Ok(vec![tab])
}

fn gauge(p: &Resolved, _seed: u64) -> Result<Vec<Table>, String> {
    let (f, set, xstar) = gauge_instance();
    let fstar = f.value(&xstar);
    let (_, tr) = gauge_fw(&f, &set, &GaugeFwConfig { t_max: p.int("t_max"), ..Default::default() }).map_err(e)?;
    let mut tab = Table::new("", &["f_value", "error"]);
    for r in &tr.rows {
        tab.push(r.t, vec![Some(r.f_value), Some(r.f_value - fstar)]);
    }
    Ok(vec![tab])
}

fn boundary(p: &Resolved, _seed: u64) -> Result<Vec<Table>, String> {
    let (f, set, fstar) = boundary_instance();
    let (_, tr) = boundary_fw(&f, &set, p.int("t_max"), &nalgebra::dvector![-1.0, 0.0]).map_err(e)?;
    let mut tab = Table::new("", &["f_value", "error", "gauge"]);
    for r in &tr.rows {
        tab.push(r.t, vec![Some(r.f_value), Some(r.f_value - fstar), tr.column(r, "gauge")]);
    }
    Ok(vec![tab])
}

fn nuclear_completion(p: &Resolved, seed: u64) -> Result<Vec<Table>, String> {
    let n = p.int("n");
    let (f, r) = completion_problem(derive_seed(seed, "completion", 0), n, p.float("frac"));
    let out = nuclear_run(&f, &NuclearConfig::new(n, n, r, p.int("t_max"), derive_seed(seed, "nuclear", 0))).map_err(e)?;
    Ok(vec![Table::from_trace("", &out.trace, &["f_value", "nuclear_norm", "x_trace_err", "x_min_eig"])])
}

fn beta_stem(beta: f64) -> String {
    format!("beta{beta}")
}

/// Records `(t, f, metric)` every `every` steps; divergence ends the run and
/// is reported as the returned iteration.
fn recorded_run(
    obj: &dyn ObjectiveOracle,
    cfg: &SaddleConfig,
    metric: &dyn Fn(&Vector) -> f64,
    mut on_step: impl FnMut(u64, &Vector),
) -> Result<(Vec<(u64, f64, f64, f64)>, Option<u64>), String> {
    let mut rows = Vec::new();
    let res = cnc_sgd_observe(obj, cfg, |v| {
        on_step(v.t, v.w);
        if v.t % cfg.record_every == 0 {
            rows.push((v.t, obj.value(v.w), obj.gradient(v.w).norm(), metric(v.w)));
        }
        true
    });
    match res {
        Ok((w, steps, _)) => {
            on_step(steps, &w);
            rows.push((steps, obj.value(&w), obj.gradient(&w).norm(), metric(&w)));
            Ok((rows, None))
        }
        Err(SaddleError::NonFinite { iteration }) => Ok((rows, Some(iteration))),
        Err(other) => Err(other.to_string()),
    }
}

fn saddle_sweep(p: &Resolved, seed: u64) -> Result<Vec<Table>, String> {
    let f = toy_saddle_objective(p.int("n"), seed);
    let threshold = p.float("threshold");
    let mut summary = Table::new("", &["beta", "escape_time", "final_f", "diverged_at"]);
    let mut tables = Vec::new();
    for (i, beta) in p.floats("betas").into_iter().enumerate() {
        let cfg = SaddleConfig::new(p.float("eta"), beta, p.int("t_max") as u64, sweep_seed(seed, i), Vector::zeros(2))
            .without_boost()
            .with_record_every(p.int("record_every").max(1) as u64);
        cfg.validate().map_err(e)?;
        let mut escape = None;
        let (rows, diverged) = recorded_run(&f, &cfg, &|w| w.norm(), |t, w| {
            if escape.is_none() && f.value(w) <= threshold {
                escape = Some(t);
            }
        })?;
        let mut tab = Table::new(&beta_stem(beta), &["f_value", "grad_norm", "w_norm"]);
        for (t, fv, g, m) in &rows {
            tab.push(*t, vec![Some(*fv), Some(*g), Some(*m)]);
        }
        summary.push(
            i as u64,
            vec![Some(beta), escape.map(|t| t as f64), rows.last().map(|r| r.1), diverged.map(|t| t as f64)],
        );
        tables.push(tab);
    }
    tables.insert(0, summary);
    Ok(tables)
}

fn phase_sweep(p: &Resolved, seed: u64) -> Result<Vec<Table>, String> {
    let d = p.int("d");
    let f = phase_retrieval_objective(p.int("n"), d, seed);
    let w0 = phase_init(d, seed);
    let mut summary = Table::new("", &["beta", "t_half", "t_tenth", "final_rel_dist", "diverged_at"]);
    let mut tables = Vec::new();
    for (i, beta) in p.floats("betas").into_iter().enumerate() {
        let cfg = SaddleConfig::new(p.float("eta"), beta, p.int("t_max") as u64, sweep_seed(seed, i), w0.clone())
            .without_boost()
            .with_record_every(p.int("record_every").max(1) as u64);
        cfg.validate().map_err(e)?;
        let (mut half, mut tenth) = (None, None);
        let (rows, diverged) = recorded_run(&f, &cfg, &|w| f.relative_distance(w), |t, w| {
            let r = f.relative_distance(w);
            if half.is_none() && r < 0.5 {
                half = Some(t);
            }
            if tenth.is_none() && r < 0.1 {
                tenth = Some(t);
            }
        })?;
        let mut tab = Table::new(&beta_stem(beta), &["f_value", "grad_norm", "rel_dist"]);
        for (t, fv, g, m) in &rows {
            tab.push(*t, vec![Some(*fv), Some(*g), Some(*m)]);
        }
        summary.push(
            i as u64,
            vec![
                Some(beta),
                half.map(|t| t as f64),
                tenth.map(|t| t as f64),
                rows.last().map(|r| r.3),
                diverged.map(|t| t as f64),
            ],
        );
        tables.push(tab);
    }
    tables.insert(0, summary);
    Ok(tables)
}

/// `list` output: one line per experiment with its parameters.
pub fn describe_all() -> String {
    let mut s = String::new();
    for exp in EXPERIMENTS {
        s.push_str(&format!("{:<24} {}\n", exp.name, exp.about));
        for p in exp.params {
            s.push_str(&format!("    {:<14} {:<10} {}\n", p.name, p.default, p.help));
        }
    }
    s
}

pub fn default_spec_value(name: &str) -> Result<Value, SpecError> {
    find(name)?;
    Ok(ExperimentSpec::new(name).to_value())
}
