use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// One checked criterion (or one case of a multi-case criterion).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionRow {
    pub id: u32,
    /// Sub-case label for criteria reported per case.
    pub case: Option<String>,
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub bound: f64,
    pub tolerance: f64,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionRow {
    pub fn new(id: u32, name: &str) -> Self {
        CriterionRow {
            id,
            case: None,
            name: name.to_string(),
            passed: false,
            measured: f64::NAN,
            bound: f64::NAN,
            tolerance: 0.0,
            detail: String::new(),
            seconds: 0.0,
        }
    }

    pub fn case(mut self, case: impl Into<String>) -> Self {
        self.case = Some(case.into());
        self
    }

    /// Sets the numbers and marks the row passed iff `measured ≤ bound·(1 + tolerance)`.
    pub fn at_most(mut self, measured: f64, bound: f64, tolerance: f64) -> Self {
        self.measured = measured;
        self.bound = bound;
        self.tolerance = tolerance;
        self.passed = measured <= bound * (1.0 + tolerance);
        self
    }

    pub fn and(mut self, ok: bool, what: &str) -> Self {
        if !ok {
            self.passed = false;
            self.note(&format!("failed: {what}"));
        }
        self
    }

    pub fn note(&mut self, s: &str) {
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(s);
    }

    pub fn with_note(mut self, s: &str) -> Self {
        self.note(s);
        self
    }

    pub fn label(&self) -> String {
        match &self.case {
            Some(c) => format!("{}[{}]", self.id, c),
            None => self.id.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub rows: Vec<CriterionRow>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn criterion_ids(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = self.rows.iter().map(|r| r.id).collect();
        ids.dedup();
        ids
    }

    /// Criteria with at least one failing row, in order.
    pub fn failing_ids(&self) -> Vec<u32> {
        self.criterion_ids().into_iter().filter(|id| !self.criterion_passed(*id)).collect()
    }

    pub fn criterion_passed(&self, id: u32) -> bool {
        self.rows.iter().filter(|r| r.id == id).all(|r| r.passed)
    }

    pub fn rows_for(&self, id: u32) -> impl Iterator<Item = &CriterionRow> {
        self.rows.iter().filter(move |r| r.id == id)
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "suite {}", self.suite);
        let _ = writeln!(out, "{:<22} {:<6} {:>14} {:>14} {:>9} {:>8}  name / detail", "criterion", "result", "measured", "bound", "tol", "secs");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<22} {:<6} {:>14.6e} {:>14.6e} {:>9.1e} {:>8.3}  {}{}",
                r.label(),
                if r.passed { "PASS" } else { "FAIL" },
                r.measured,
                r.bound,
                r.tolerance,
                r.seconds,
                r.name,
                if r.detail.is_empty() { String::new() } else { format!(" ({})", r.detail) }
            );
        }
        let failing = self.failing_ids();
        let _ = writeln!(
            out,
            "{} of {} criteria passed{}",
            self.criterion_ids().len() - failing.len(),
            self.criterion_ids().len(),
            if failing.is_empty() { String::new() } else { format!("; failing: {failing:?}") }
        );
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
