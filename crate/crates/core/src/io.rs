//! Plain-text file formats: point sets, sampled grids with optional targets,
//! and model files.
//!
//! Point files hold one point per line, whitespace-separated decimal
//! coordinates; `#` starts a comment line; the dimension is inferred from the
//! first data line. Grid files share the format with an optional trailing
//! target column. Model files list the activation id, the dimension, and one
//! `term <w> <c_1> ... <c_d> <nu>` line per unit, with full round-trip
//! decimal precision.

use crate::activations::builtin;
use crate::geometry::{GeometryError, Point};
use crate::network::{EvaluationGrid, NetworkError, RbfTerm, ShiftedRbfModel};
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{path}: no data lines")]
    Empty { path: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

fn read_to_string(path: &Path) -> Result<String, FileError> {
    std::fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> FileError {
    FileError::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Data lines of a file with their 1-based line numbers; comments and blank
/// lines skipped.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_fields(path: &Path, line_no: usize, line: &str) -> Result<Vec<f64>, FileError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<f64>()
                .map_err(|_| parse_err(path, line_no, format!("invalid number '{tok}'")))
        })
        .collect()
}

/// Reads a point file. Dimension is set by the first data line.
pub fn read_points(path: impl AsRef<Path>) -> Result<Vec<Point>, FileError> {
    let path = path.as_ref();
    let text = read_to_string(path)?;
    let mut points = Vec::new();
    let mut dim: Option<usize> = None;
    for (line_no, line) in data_lines(&text) {
        let fields = parse_fields(path, line_no, line)?;
        match dim {
            None => dim = Some(fields.len()),
            Some(d) if d != fields.len() => {
                return Err(parse_err(
                    path,
                    line_no,
                    format!("expected {d} coordinates, found {}", fields.len()),
                ));
            }
            _ => {}
        }
        points.push(
            Point::new(fields)
                .map_err(|e| parse_err(path, line_no, e.to_string()))?,
        );
    }
    if points.is_empty() {
        return Err(FileError::Empty {
            path: path.display().to_string(),
        });
    }
    Ok(points)
}

/// Reads a grid file. With `with_targets`, the last column of every line is
/// the target value and the rest are coordinates.
pub fn read_grid(path: impl AsRef<Path>, with_targets: bool) -> Result<EvaluationGrid, FileError> {
    let path = path.as_ref();
    let text = read_to_string(path)?;
    let mut samples = Vec::new();
    let mut targets = Vec::new();
    let mut width: Option<usize> = None;
    for (line_no, line) in data_lines(&text) {
        let mut fields = parse_fields(path, line_no, line)?;
        match width {
            None => width = Some(fields.len()),
            Some(w) if w != fields.len() => {
                return Err(parse_err(
                    path,
                    line_no,
                    format!("expected {w} columns, found {}", fields.len()),
                ));
            }
            _ => {}
        }
        if with_targets {
            if fields.len() < 2 {
                return Err(parse_err(
                    path,
                    line_no,
                    "need at least one coordinate and a target value",
                ));
            }
            targets.push(fields.pop().expect("nonempty"));
        }
        samples.push(
            Point::new(fields)
                .map_err(|e| parse_err(path, line_no, e.to_string()))?,
        );
    }
    if samples.is_empty() {
        return Err(FileError::Empty {
            path: path.display().to_string(),
        });
    }
    Ok(if with_targets {
        EvaluationGrid::with_targets(samples, targets)?
    } else {
        EvaluationGrid::new(samples)?
    })
}

/// Reads a one-value-per-line file (e.g. target values for a point set).
pub fn read_values(path: impl AsRef<Path>) -> Result<Vec<f64>, FileError> {
    let path = path.as_ref();
    let text = read_to_string(path)?;
    let mut values = Vec::new();
    for (line_no, line) in data_lines(&text) {
        let fields = parse_fields(path, line_no, line)?;
        if fields.len() != 1 {
            return Err(parse_err(
                path,
                line_no,
                format!("expected a single value, found {}", fields.len()),
            ));
        }
        values.push(fields[0]);
    }
    if values.is_empty() {
        return Err(FileError::Empty {
            path: path.display().to_string(),
        });
    }
    Ok(values)
}

fn write_file(path: &Path, contents: &str) -> Result<(), FileError> {
    std::fs::write(path, contents).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes a point file.
pub fn write_points(path: impl AsRef<Path>, points: &[Point]) -> Result<(), FileError> {
    let mut out = String::new();
    for p in points {
        let mut first = true;
        for c in p.coords() {
            if !first {
                out.push(' ');
            }
            let _ = write!(out, "{c}");
            first = false;
        }
        out.push('\n');
    }
    write_file(path.as_ref(), &out)
}

/// Writes a grid file, with the target as a trailing column when present.
pub fn write_grid(path: impl AsRef<Path>, grid: &EvaluationGrid) -> Result<(), FileError> {
    let mut out = String::new();
    for (i, p) in grid.samples().iter().enumerate() {
        for c in p.coords() {
            let _ = write!(out, "{c} ");
        }
        match grid.targets() {
            Some(t) => {
                let _ = writeln!(out, "{}", t[i]);
            }
            None => {
                out.pop();
                out.push('\n');
            }
        }
    }
    write_file(path.as_ref(), &out)
}

/// Serializes a model: activation id, dimension, then one term per line as
/// `term <w> <c_1> ... <c_d> <nu>`.
pub fn write_model(path: impl AsRef<Path>, model: &ShiftedRbfModel) -> Result<(), FileError> {
    let mut out = String::new();
    let _ = writeln!(out, "activation {}", model.activation().id());
    let _ = writeln!(out, "dim {}", model.dim());
    for t in model.terms() {
        let _ = write!(out, "term {}", t.weight);
        for c in t.centroid.coords() {
            let _ = write!(out, " {c}");
        }
        let _ = writeln!(out, " {}", t.shift);
    }
    write_file(path.as_ref(), &out)
}

/// Reads a model file back. Only built-in activation ids can be resolved.
pub fn read_model(path: impl AsRef<Path>) -> Result<ShiftedRbfModel, FileError> {
    let path = path.as_ref();
    let text = read_to_string(path)?;
    let mut activation = None;
    let mut dim: Option<usize> = None;
    let mut terms: Vec<RbfTerm> = Vec::new();
    for (line_no, line) in data_lines(&text) {
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("activation") => {
                let name = parts
                    .next()
                    .ok_or_else(|| parse_err(path, line_no, "missing activation id"))?;
                activation = Some(
                    builtin(name).map_err(|e| parse_err(path, line_no, e.to_string()))?,
                );
            }
            Some("dim") => {
                let d: usize = parts
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(path, line_no, "invalid dimension"))?;
                dim = Some(d);
            }
            Some("term") => {
                let d = dim.ok_or_else(|| {
                    parse_err(path, line_no, "term before dim declaration")
                })?;
                let fields: Vec<f64> = parts
                    .map(|tok| {
                        tok.parse::<f64>().map_err(|_| {
                            parse_err(path, line_no, format!("invalid number '{tok}'"))
                        })
                    })
                    .collect::<Result<_, _>>()?;
                if fields.len() != d + 2 {
                    return Err(parse_err(
                        path,
                        line_no,
                        format!("expected {} fields for a term, found {}", d + 2, fields.len()),
                    ));
                }
                let weight = fields[0];
                let shift = fields[d + 1];
                let centroid = Point::new(fields[1..=d].to_vec())
                    .map_err(|e| parse_err(path, line_no, e.to_string()))?;
                terms.push(RbfTerm {
                    weight,
                    centroid,
                    shift,
                });
            }
            Some(other) => {
                return Err(parse_err(path, line_no, format!("unknown directive '{other}'")));
            }
            None => {}
        }
    }
    let activation = activation.ok_or_else(|| parse_err(path, 0, "missing activation line"))?;
    Ok(ShiftedRbfModel::new(terms, activation)?)
}
