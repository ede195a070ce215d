//! Experiment reports: an ordered, diff-friendly record of inputs, results,
//! and timings, plus CSV emission helpers.
//!
//! Timings never go into CSV files, so repeated runs with the same seed
//! produce byte-identical tabular output.

use crate::error::CliError;
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Default)]
pub struct ExperimentReport {
    pub kind: String,
    pub inputs: Vec<(String, String)>,
    pub results: Vec<(String, String)>,
    pub timings_ms: Vec<(String, f64)>,
    pub csv_files: Vec<PathBuf>,
}

impl ExperimentReport {
    pub fn new(kind: impl Into<String>) -> Self {
        ExperimentReport {
            kind: kind.into(),
            ..Default::default()
        }
    }

    pub fn input(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.inputs.push((key.into(), value.to_string()));
    }

    pub fn result(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.results.push((key.into(), value.to_string()));
    }

    pub fn timing(&mut self, key: impl Into<String>, millis: f64) {
        self.timings_ms.push((key.into(), millis));
    }

    /// Looks up a result value (test aid).
    pub fn get_result(&self, key: &str) -> Option<&str> {
        self.results
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for ExperimentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "== rbfnet {} (v{}) ==",
            self.kind,
            env!("CARGO_PKG_VERSION")
        )?;
        for (k, v) in &self.inputs {
            writeln!(f, "input  {k} = {v}")?;
        }
        for (k, v) in &self.results {
            writeln!(f, "result {k} = {v}")?;
        }
        for (k, v) in &self.timings_ms {
            writeln!(f, "timing {k} = {v:.3} ms")?;
        }
        for p in &self.csv_files {
            writeln!(f, "wrote  {}", p.display())?;
        }
        Ok(())
    }
}

/// Writes one CSV file with a header row. Values are already rendered; f64
/// values should be formatted with `{}` (shortest round-trip form) for
/// reproducibility.
pub fn write_csv(
    path: &Path,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<(), CliError> {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Renders an f64 in shortest round-trip form.
pub fn num(v: f64) -> String {
    format!("{v}")
}
