//! Shifted and classic RBF network models, shift dictionaries, and
//! least-squares fitting over sampled grids.
//!
//! The shifted form sums `w_i * g(||x - c_i|| - nu_i)`; the classic form sums
//! `w_i * g(||x - c_i|| / sigma_i)`. Fitting is linear in the weights over a
//! dictionary of (centroid, shift) atoms, solved through an SVD so that
//! rank-deficient and underdetermined systems get the minimum-norm solution.

use crate::activations::Activation;
use crate::geometry::{dist_slices, GeometryError, Point};
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("a model needs at least one term")]
    EmptyModel,
    #[error("smoothing factor must be positive, got {0}")]
    NonPositiveSmoothing(f64),
    #[error("shift grid needs count >= 1 and min <= max, got [{min}, {max}] x {count}")]
    InvalidShiftGrid { min: f64, max: f64, count: usize },
    #[error("dictionary needs at least one centroid")]
    EmptyCentroidList,
    #[error("grid has no target values")]
    MissingTargets,
    #[error("target count {targets} does not match sample count {samples}")]
    TargetLengthMismatch { targets: usize, samples: usize },
    #[error("duplicate sample point at indices {first} and {second}")]
    DuplicateSample { first: usize, second: usize },
    #[error("ridge must be finite and nonnegative, got {0}")]
    InvalidRidge(f64),
    #[error("all dictionary columns are degenerate on this grid")]
    DegenerateDesign,
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

/// One unit of a shifted RBF network.
#[derive(Debug, Clone)]
pub struct RbfTerm {
    pub weight: f64,
    pub centroid: Point,
    pub shift: f64,
}

/// `H(x) = sum_i w_i g(||x - c_i|| - nu_i)`, summed in term order.
#[derive(Debug, Clone)]
pub struct ShiftedRbfModel {
    terms: Vec<RbfTerm>,
    activation: Activation,
}

impl ShiftedRbfModel {
    pub fn new(terms: Vec<RbfTerm>, activation: Activation) -> Result<Self, NetworkError> {
        if terms.is_empty() {
            return Err(NetworkError::EmptyModel);
        }
        let dim = terms[0].centroid.dim();
        for t in &terms {
            if t.centroid.dim() != dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    found: t.centroid.dim(),
                }
                .into());
            }
        }
        Ok(ShiftedRbfModel { terms, activation })
    }

    pub fn dim(&self) -> usize {
        self.terms[0].centroid.dim()
    }

    pub fn terms(&self) -> &[RbfTerm] {
        &self.terms
    }

    pub fn activation(&self) -> &Activation {
        &self.activation
    }

    pub fn evaluate(&self, x: &Point) -> Result<f64, NetworkError> {
        if x.dim() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            }
            .into());
        }
        let mut sum = 0.0;
        for t in &self.terms {
            let d = dist_slices(x.coords(), t.centroid.coords());
            sum += t.weight * self.activation.eval(d - t.shift);
        }
        Ok(sum)
    }
}

/// One unit of a classic (smoothing-factor) RBF network.
#[derive(Debug, Clone)]
pub struct ClassicRbfTerm {
    pub weight: f64,
    pub centroid: Point,
    pub smoothing: f64,
}

/// `G(x) = sum_i w_i g(||x - c_i|| / sigma_i)` with all `sigma_i > 0`.
#[derive(Debug, Clone)]
pub struct ClassicRbfModel {
    terms: Vec<ClassicRbfTerm>,
    activation: Activation,
}

impl ClassicRbfModel {
    pub fn new(terms: Vec<ClassicRbfTerm>, activation: Activation) -> Result<Self, NetworkError> {
        if terms.is_empty() {
            return Err(NetworkError::EmptyModel);
        }
        let dim = terms[0].centroid.dim();
        for t in &terms {
            if !(t.smoothing > 0.0) || !t.smoothing.is_finite() {
                return Err(NetworkError::NonPositiveSmoothing(t.smoothing));
            }
            if t.centroid.dim() != dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    found: t.centroid.dim(),
                }
                .into());
            }
        }
        Ok(ClassicRbfModel { terms, activation })
    }

    pub fn dim(&self) -> usize {
        self.terms[0].centroid.dim()
    }

    pub fn terms(&self) -> &[ClassicRbfTerm] {
        &self.terms
    }

    pub fn activation(&self) -> &Activation {
        &self.activation
    }

    pub fn evaluate(&self, x: &Point) -> Result<f64, NetworkError> {
        if x.dim() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            }
            .into());
        }
        let mut sum = 0.0;
        for t in &self.terms {
            let d = dist_slices(x.coords(), t.centroid.coords());
            sum += t.weight * self.activation.eval(d / t.smoothing);
        }
        Ok(sum)
    }
}

/// Sample points standing in for a compact set, with optional target values.
#[derive(Debug, Clone)]
pub struct EvaluationGrid {
    samples: Vec<Point>,
    targets: Option<Vec<f64>>,
}

impl EvaluationGrid {
    pub fn new(samples: Vec<Point>) -> Result<Self, NetworkError> {
        Self::build(samples, None)
    }

    pub fn with_targets(samples: Vec<Point>, targets: Vec<f64>) -> Result<Self, NetworkError> {
        Self::build(samples, Some(targets))
    }

    fn build(samples: Vec<Point>, targets: Option<Vec<f64>>) -> Result<Self, NetworkError> {
        if samples.is_empty() {
            return Err(GeometryError::EmptyPointSet.into());
        }
        let dim = samples[0].dim();
        for p in &samples {
            if p.dim() != dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                }
                .into());
            }
        }
        for i in 0..samples.len() {
            for j in i + 1..samples.len() {
                if samples[i].coords() == samples[j].coords() {
                    return Err(NetworkError::DuplicateSample { first: i, second: j });
                }
            }
        }
        if let Some(t) = &targets {
            if t.len() != samples.len() {
                return Err(NetworkError::TargetLengthMismatch {
                    targets: t.len(),
                    samples: samples.len(),
                });
            }
        }
        Ok(EvaluationGrid { samples, targets })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    pub fn dim(&self) -> usize {
        self.samples[0].dim()
    }

    pub fn samples(&self) -> &[Point] {
        &self.samples
    }

    pub fn targets(&self) -> Option<&[f64]> {
        self.targets.as_deref()
    }
}

/// Uniformly spaced shift values `nu` on `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl ShiftGrid {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self, NetworkError> {
        if count < 1 || !(min <= max) || !min.is_finite() || !max.is_finite() {
            return Err(NetworkError::InvalidShiftGrid { min, max, count });
        }
        Ok(ShiftGrid { min, max, count })
    }

    /// Grid spanning an observed value range, widened by one grid spacing on
    /// each side so the useful argument range of the activation is covered.
    pub fn spanning(lo: f64, hi: f64, count: usize) -> Result<Self, NetworkError> {
        if count < 1 || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(NetworkError::InvalidShiftGrid {
                min: lo,
                max: hi,
                count,
            });
        }
        if count == 1 {
            let mid = 0.5 * (lo + hi);
            return ShiftGrid::new(mid, mid, 1);
        }
        let margin = ((hi - lo) / (count - 1) as f64).max(f64::MIN_POSITIVE);
        ShiftGrid::new(lo - margin, hi + margin, count)
    }

    pub fn spacing(&self) -> f64 {
        if self.count <= 1 {
            0.0
        } else {
            (self.max - self.min) / (self.count - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let h = self.spacing();
        (0..self.count).map(|i| self.min + h * i as f64).collect()
    }
}

/// A dictionary of (centroid, shift) atoms: the Cartesian product of a
/// centroid list and a shift grid, centroid-major.
#[derive(Debug, Clone)]
pub struct Dictionary {
    centroids: Vec<Point>,
    shifts: Vec<f64>,
    shift_grid: ShiftGrid,
    activation: Activation,
}

/// Builds the atom product `centroids x shifts`.
pub fn build_dictionary(
    centroids: &[Point],
    shift_grid: ShiftGrid,
    activation: Activation,
) -> Result<Dictionary, NetworkError> {
    if centroids.is_empty() {
        return Err(NetworkError::EmptyCentroidList);
    }
    let dim = centroids[0].dim();
    for c in centroids {
        if c.dim() != dim {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                found: c.dim(),
            }
            .into());
        }
    }
    Ok(Dictionary {
        centroids: centroids.to_vec(),
        shifts: shift_grid.values(),
        shift_grid,
        activation,
    })
}

impl Dictionary {
    pub fn len(&self) -> usize {
        self.centroids.len() * self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    pub fn dim(&self) -> usize {
        self.centroids[0].dim()
    }

    pub fn activation(&self) -> &Activation {
        &self.activation
    }

    pub fn shift_grid(&self) -> &ShiftGrid {
        &self.shift_grid
    }

    pub fn centroids(&self) -> &[Point] {
        &self.centroids
    }

    /// Atom `a` is (centroid `a / shifts`, shift `a % shifts`).
    pub fn atom(&self, a: usize) -> (&Point, f64) {
        let per = self.shifts.len();
        (&self.centroids[a / per], self.shifts[a % per])
    }

    /// Evaluates atom `a` at a point.
    pub fn eval_atom(&self, a: usize, x: &Point) -> f64 {
        let (c, nu) = self.atom(a);
        let d = dist_slices(x.coords(), c.coords());
        self.activation.eval(d - nu)
    }
}

/// Residual summary of a least-squares fit.
#[derive(Debug, Clone)]
pub struct FitReport {
    /// Root mean square residual over the grid.
    pub rms_error: f64,
    /// Max-abs residual over the grid.
    pub uniform_error: f64,
    /// Dictionary atom indices dropped because their design column was
    /// identically zero on the grid.
    pub dropped_atoms: Vec<usize>,
    /// Fitted weight per kept atom, aligned with the model terms.
    pub weights: Vec<f64>,
}

fn design_matrix(dict: &Dictionary, grid: &EvaluationGrid) -> DMatrix<f64> {
    let n = grid.len();
    let m = dict.len();
    DMatrix::from_fn(n, m, |i, j| dict.eval_atom(j, &grid.samples()[i]))
}

/// Minimizes `sum (H(x) - f(x))^2 + ridge * ||w||^2` by singular value
/// decomposition of the design matrix. Returns the fitted model and its
/// residual report. Identically-zero design columns are dropped (and listed
/// in the report) before solving.
pub fn fit_least_squares(
    dict: &Dictionary,
    grid: &EvaluationGrid,
    ridge: f64,
) -> Result<(ShiftedRbfModel, FitReport), NetworkError> {
    if !(ridge >= 0.0) || !ridge.is_finite() {
        return Err(NetworkError::InvalidRidge(ridge));
    }
    let targets = grid.targets().ok_or(NetworkError::MissingTargets)?;
    if dict.dim() != grid.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: grid.dim(),
            found: dict.dim(),
        }
        .into());
    }
    let full = design_matrix(dict, grid);
    let mut kept: Vec<usize> = Vec::with_capacity(dict.len());
    let mut dropped: Vec<usize> = Vec::new();
    for a in 0..dict.len() {
        if full.column(a).iter().all(|&v| v == 0.0) {
            dropped.push(a);
        } else {
            kept.push(a);
        }
    }
    if kept.is_empty() {
        return Err(NetworkError::DegenerateDesign);
    }
    let design = full.select_columns(kept.iter());
    let y = DVector::from_column_slice(targets);
    let weights = svd_solve(&design, &y, ridge)?;

    let residual = &design * &weights - &y;
    let uniform = residual.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let rms = (residual.norm_squared() / grid.len() as f64).sqrt();

    let terms: Vec<RbfTerm> = kept
        .iter()
        .zip(weights.iter())
        .map(|(&a, &w)| {
            let (c, nu) = dict.atom(a);
            RbfTerm {
                weight: w,
                centroid: c.clone(),
                shift: nu,
            }
        })
        .collect();
    let model = ShiftedRbfModel::new(terms, dict.activation().clone())?;
    let report = FitReport {
        rms_error: rms,
        uniform_error: uniform,
        dropped_atoms: dropped,
        weights: weights.iter().copied().collect(),
    };
    Ok((model, report))
}

/// Ridge-regularized minimum-norm least squares via SVD:
/// `w = V diag(s/(s^2 + ridge)) U^T y`, with tiny singular values cut off
/// when `ridge = 0`.
fn svd_solve(
    design: &DMatrix<f64>,
    y: &DVector<f64>,
    ridge: f64,
) -> Result<DVector<f64>, NetworkError> {
    let svd = design.clone().svd(true, true);
    let u = svd
        .u
        .as_ref()
        .ok_or_else(|| NetworkError::NumericalFailure("SVD did not produce U".into()))?;
    let v_t = svd
        .v_t
        .as_ref()
        .ok_or_else(|| NetworkError::NumericalFailure("SVD did not produce V^T".into()))?;
    let smax = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s));
    if !smax.is_finite() {
        return Err(NetworkError::NumericalFailure(
            "singular values are not finite".into(),
        ));
    }
    let cutoff = smax * 1e-13;
    let uty = u.transpose() * y;
    let mut scaled = DVector::zeros(svd.singular_values.len());
    for (i, &s) in svd.singular_values.iter().enumerate() {
        let factor = if ridge > 0.0 {
            s / (s * s + ridge)
        } else if s > cutoff {
            1.0 / s
        } else {
            0.0
        };
        scaled[i] = factor * uty[i];
    }
    Ok(v_t.transpose() * scaled)
}

/// `max_x |H(x) - f(x)|` over the grid samples.
pub fn uniform_error(model: &ShiftedRbfModel, grid: &EvaluationGrid) -> Result<f64, NetworkError> {
    let targets = grid.targets().ok_or(NetworkError::MissingTargets)?;
    let mut max = 0.0f64;
    for (x, &t) in grid.samples().iter().zip(targets) {
        max = max.max((model.evaluate(x)? - t).abs());
    }
    Ok(max)
}

/// Outcome of a greedy (matching-pursuit) fit.
#[derive(Debug, Clone)]
pub struct GreedyReport {
    /// Selected atom indices, in selection order.
    pub selected: Vec<usize>,
    pub uniform_error: f64,
    pub rms_error: f64,
    /// Whether the tolerance was reached within the term budget.
    pub tolerance_met: bool,
}

/// Orthogonal matching pursuit over the dictionary: repeatedly picks the atom
/// most correlated with the current residual (lowest index wins ties), refits
/// all selected weights by least squares, and stops at `max_terms` terms or
/// once the uniform error drops below `tol`.
pub fn greedy_fit(
    dict: &Dictionary,
    grid: &EvaluationGrid,
    max_terms: usize,
    tol: f64,
) -> Result<(ShiftedRbfModel, GreedyReport), NetworkError> {
    if max_terms < 1 {
        return Err(NetworkError::EmptyModel);
    }
    let targets = grid.targets().ok_or(NetworkError::MissingTargets)?;
    if dict.dim() != grid.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: grid.dim(),
            found: dict.dim(),
        }
        .into());
    }
    let full = design_matrix(dict, grid);
    let norms: Vec<f64> = (0..dict.len()).map(|a| full.column(a).norm()).collect();
    let y = DVector::from_column_slice(targets);

    let mut selected: Vec<usize> = Vec::new();
    let mut weights = DVector::zeros(0);
    let mut residual = y.clone();
    let mut uniform = residual.iter().fold(0.0f64, |m, r| m.max(r.abs()));

    while selected.len() < max_terms && uniform >= tol {
        // Most correlated unselected atom, normalized by column norm.
        let mut best: Option<(usize, f64)> = None;
        for a in 0..dict.len() {
            if norms[a] == 0.0 || selected.contains(&a) {
                continue;
            }
            let corr = (full.column(a).dot(&residual) / norms[a]).abs();
            if best.map_or(true, |(_, b)| corr > b) {
                best = Some((a, corr));
            }
        }
        let Some((atom, corr)) = best else { break };
        if corr <= f64::EPSILON * norms[atom].max(1.0) {
            break; // residual orthogonal to everything left
        }
        selected.push(atom);
        let design = full.select_columns(selected.iter());
        weights = svd_solve(&design, &y, 0.0)?;
        residual = &design * &weights - &y;
        uniform = residual.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    }

    if selected.is_empty() {
        // Zero target (or empty-correlation) edge: fall back to one zero-weight term.
        selected.push(
            (0..dict.len())
                .find(|&a| norms[a] > 0.0)
                .ok_or(NetworkError::DegenerateDesign)?,
        );
        weights = DVector::zeros(1);
    }
    let rms = (residual.norm_squared() / grid.len() as f64).sqrt();
    let terms: Vec<RbfTerm> = selected
        .iter()
        .zip(weights.iter())
        .map(|(&a, &w)| {
            let (c, nu) = dict.atom(a);
            RbfTerm {
                weight: w,
                centroid: c.clone(),
                shift: nu,
            }
        })
        .collect();
    let model = ShiftedRbfModel::new(terms, dict.activation().clone())?;
    let report = GreedyReport {
        selected,
        uniform_error: uniform,
        rms_error: rms,
        tolerance_met: uniform < tol,
    };
    Ok((model, report))
}
