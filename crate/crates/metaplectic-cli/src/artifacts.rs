//! Artifact writers. The summary JSON is fully deterministic (sorted keys,
//! no timestamps); CSV files start with one timestamped comment line and are
//! byte-identical below it for a fixed config and seed.

use std::path::Path;

use crate::CliError;

/// Scientific-notation float formatting used in every CSV cell: shortest
/// representation that round-trips, so identical values print identically.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// A float for the summary document; JSON has no infinities, so non-finite
/// values become `null`.
pub fn json_float(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x).map(serde_json::Value::Number).unwrap_or(serde_json::Value::Null)
}

pub fn write_summary(path: &Path, summary: &serde_json::Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(summary)
        .map_err(|e| CliError::io(format!("cannot serialize the summary: {e}")))?;
    std::fs::write(path, text + "\n")
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}

/// Collects rows and writes them under a header, prefixed by the timestamp
/// comment line.
pub struct CsvTable {
    header: String,
    rows: Vec<String>,
}

impl CsvTable {
    pub fn new(columns: &[&str]) -> CsvTable {
        CsvTable { header: columns.join(","), rows: Vec::new() }
    }

    pub fn push(&mut self, cells: Vec<String>) {
        self.rows.push(cells.join(","));
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let stamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let mut text = format!("# generated unix_seconds={stamp}\n{}\n", self.header);
        for row in &self.rows {
            text.push_str(row);
            text.push('\n');
        }
        std::fs::write(path, text)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
    }
}
