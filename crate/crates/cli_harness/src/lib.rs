//! Experiment registry, acceptance criteria and the `fgame` tool.
//!
//! [`experiments::run`] turns a JSON [`spec::ExperimentSpec`] into CSV
//! tables plus a metadata sidecar; [`verify`] runs a named group of
//! acceptance criteria and returns a [`report::Report`].

pub mod criteria;
pub mod experiments;
pub mod instances;
pub mod output;
pub mod report;
pub mod spec;

pub use criteria::{run_criterion, CRITERION_COUNT, CRITERION_NAMES};
pub use experiments::{determinism_check, run, RunError, RunOutput, EXPERIMENTS};
pub use report::{CriterionRow, Report};
pub use spec::{ExperimentSpec, SpecError};

/// Criterion groups accepted by [`verify`].
pub const SUITES: [(&str, &[u32]); 6] = [
    ("rates", &[1, 3, 4, 8]),
    ("equivalence", &[2]),
    ("momentum", &[5, 6, 7, 12, 13]),
    ("projection_free", &[9, 10, 11]),
    ("saddle", &[14, 15]),
    ("all", &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16]),
];

pub fn suite_ids(suite: &str) -> Result<&'static [u32], SpecError> {
    SUITES.iter().find(|(n, _)| *n == suite).map(|(_, ids)| *ids).ok_or_else(|| {
        SpecError::Schema(format!(
            "unknown suite `{suite}`; available: {}",
            SUITES.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
        ))
    })
}

/// Runs the criteria of `suite` in id order.
pub fn verify(suite: &str) -> Result<Report, SpecError> {
    let ids = suite_ids(suite)?;
    let rows = ids.iter().flat_map(|&id| run_criterion(id)).collect();
    Ok(Report { suite: suite.to_string(), rows })
}
