//! CSV tables and atomic file writes.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use core_oracles::Trace;

/// An output table: an integer `t` column followed by scalar columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File suffix; empty for the experiment's main table.
    pub stem: String,
    pub columns: Vec<String>,
    pub rows: Vec<(u64, Vec<Option<f64>>)>,
}

impl Table {
    pub fn new(stem: &str, columns: &[&str]) -> Self {
        Table { stem: stem.to_string(), columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, t: u64, values: Vec<Option<f64>>) {
        assert_eq!(values.len(), self.columns.len(), "row width mismatch");
        self.rows.push((t, values));
    }

    /// Copies the named trace columns.
    pub fn from_trace(stem: &str, trace: &Trace, columns: &[&str]) -> Self {
        let mut tab = Table::new(stem, columns);
        for r in &trace.rows {
            tab.push(r.t, columns.iter().map(|c| trace.column(r, c)).collect());
        }
        tab
    }

    /// Header `t,<columns>`; values in `{:.16e}` (17 significant digits),
    /// missing values empty.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t");
        for c in &self.columns {
            s.push(',');
            s.push_str(c);
        }
        s.push('\n');
        for (t, vals) in &self.rows {
            let _ = write!(s, "{t}");
            for v in vals {
                s.push(',');
                if let Some(v) = v {
                    let _ = write!(s, "{v:.16e}");
                }
            }
            s.push('\n');
        }
        s
    }
}

/// Writes through a temporary file in the destination directory, then
/// renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
