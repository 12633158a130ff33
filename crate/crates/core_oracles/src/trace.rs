//! Per-iteration records produced by every run.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: u64,
    pub f_value: f64,
    pub grad_norm: f64,
    pub gap: Option<f64>,
    pub dist: Option<f64>,
    /// Aligned with [`Trace::extra_columns`]; `None` where not applicable.
    pub extras: Vec<Option<f64>>,
}

impl TraceRow {
    pub fn new(t: u64, f_value: f64, grad_norm: f64) -> Self {
        TraceRow { t, f_value, grad_norm, gap: None, dist: None, extras: Vec::new() }
    }

    pub fn with_gap(mut self, gap: Option<f64>) -> Self {
        self.gap = gap;
        self
    }

    pub fn with_dist(mut self, dist: Option<f64>) -> Self {
        self.dist = dist;
        self
    }

    pub fn with_extras(mut self, extras: Vec<Option<f64>>) -> Self {
        self.extras = extras;
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub seed: Option<u64>,
    pub config_digest: Option<String>,
    /// Free-form warnings raised during the run (e.g. a vanishing gradient).
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub extra_columns: Vec<String>,
    pub rows: Vec<TraceRow>,
    pub meta: TraceMeta,
}

impl Trace {
    pub fn new(extra_columns: &[&str]) -> Self {
        Trace { extra_columns: extra_columns.iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }

    /// Appends a row. Panics if `t` does not strictly increase or the extras
    /// width does not match the declared columns.
    pub fn push(&mut self, mut row: TraceRow) {
        if let Some(last) = self.rows.last() {
            assert!(row.t > last.t, "trace rows must have strictly increasing t ({} after {})", row.t, last.t);
        } else {
            assert!(row.t <= 1, "trace rows start at t = 0 or 1");
        }
        if row.extras.is_empty() {
            row.extras = vec![None; self.extra_columns.len()];
        }
        assert_eq!(row.extras.len(), self.extra_columns.len(), "extras width mismatch");
        self.rows.push(row);
    }

    pub fn flag(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        if !self.meta.flags.contains(&msg) {
            self.meta.flags.push(msg);
        }
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    pub fn extra_index(&self, name: &str) -> Option<usize> {
        self.extra_columns.iter().position(|c| c == name)
    }

    /// Value of a named column in a row: `f_value`, `grad_norm`, `gap`,
    /// `dist`, or a declared extra.
    pub fn column(&self, row: &TraceRow, name: &str) -> Option<f64> {
        match name {
            "f_value" => Some(row.f_value),
            "grad_norm" => Some(row.grad_norm),
            "gap" => row.gap,
            "dist" => row.dist,
            other => self.extra_index(other).and_then(|i| row.extras[i]),
        }
    }

    pub fn series(&self, name: &str) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| self.column(r, name)).collect()
    }
}
