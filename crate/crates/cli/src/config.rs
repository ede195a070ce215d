//! Experiment configuration: optional TOML file merged under command-line
//! flags, plus the small spec parsers for shift grids and lattices.

use crate::error::CliError;
use rbfnet::network::ShiftGrid;
use serde::Deserialize;
use std::path::{Path, PathBuf};

/// File-backed configuration. Every field is optional; command-line flags
/// take precedence over file values.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub kind: Option<String>,
    pub points: Option<PathBuf>,
    pub centroids: Option<PathBuf>,
    pub grid: Option<PathBuf>,
    pub targets: Option<PathBuf>,
    pub activation: Option<String>,
    pub dim: Option<usize>,
    pub p: Option<f64>,
    pub shifts: Option<String>,
    pub lattice: Option<String>,
    pub ridge: Option<f64>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub max_terms: Option<usize>,
    pub fit_tol: Option<f64>,
    pub compare_fit: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let config: FileConfig = toml::from_str(&text)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        Ok(config)
    }

    /// Errors unless the configured kind (when present) matches the invoked
    /// subcommand.
    pub fn check_kind(&self, expected: &str) -> Result<(), CliError> {
        if let Some(kind) = &self.kind {
            if kind != expected {
                return Err(CliError::input(format!(
                    "config kind '{kind}' does not match subcommand '{expected}'"
                )));
            }
        }
        Ok(())
    }
}

/// Referenced input files must exist at load time.
pub fn require_exists(path: &Path) -> Result<(), CliError> {
    if !path.exists() {
        return Err(CliError::input(format!(
            "{}: file does not exist",
            path.display()
        )));
    }
    Ok(())
}

/// Parses `MIN:MAX:COUNT` into a shift grid.
pub fn parse_shift_spec(spec: &str) -> Result<ShiftGrid, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::input(format!(
            "shift spec '{spec}' must be MIN:MAX:COUNT"
        )));
    }
    let min: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::input(format!("invalid shift min '{}'", parts[0])))?;
    let max: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::input(format!("invalid shift max '{}'", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| CliError::input(format!("invalid shift count '{}'", parts[2])))?;
    Ok(ShiftGrid::new(min, max, count)?)
}

/// Parses a lattice spec: one `MIN:MAX:COUNT` group per axis, comma
/// separated, e.g. `-1:1:5,-1:1:5`.
pub fn parse_lattice_spec(spec: &str) -> Result<(Vec<f64>, Vec<f64>, Vec<usize>), CliError> {
    let mut mins = Vec::new();
    let mut maxs = Vec::new();
    let mut counts = Vec::new();
    for group in spec.split(',') {
        let parts: Vec<&str> = group.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::input(format!(
                "lattice group '{group}' must be MIN:MAX:COUNT"
            )));
        }
        mins.push(
            parts[0]
                .parse()
                .map_err(|_| CliError::input(format!("invalid lattice min '{}'", parts[0])))?,
        );
        maxs.push(
            parts[1]
                .parse()
                .map_err(|_| CliError::input(format!("invalid lattice max '{}'", parts[1])))?,
        );
        counts.push(
            parts[2]
                .parse()
                .map_err(|_| CliError::input(format!("invalid lattice count '{}'", parts[2])))?,
        );
    }
    if mins.is_empty() {
        return Err(CliError::input("empty lattice spec"));
    }
    Ok((mins, maxs, counts))
}
