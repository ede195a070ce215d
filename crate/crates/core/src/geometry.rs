//! Points, centroids, Euclidean distances, and tolerance-based grouping of
//! distance values into levels.
//!
//! Everything downstream (cycle detection, closed paths, duality bounds)
//! works on the [`DistanceLevelGrouping`] produced here: for each centroid,
//! the points are partitioned into groups of (near-)equal distance, and each
//! group becomes one row of a 0/1 [`IncidenceMatrix`].

use thiserror::Error;

/// Relative scale of the default grouping tolerance: `1e-9 * (1 + max distance)`.
pub const DEFAULT_TOLERANCE_SCALE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coordinate {index} is not finite")]
    NonFiniteCoordinate { index: usize },
    #[error("a point needs at least one coordinate")]
    EmptyCoordinates,
    #[error("need at least one point")]
    EmptyPointSet,
    #[error("need at least one centroid")]
    EmptyCentroidSet,
    #[error("points {first} and {second} coincide within tolerance {tolerance:e}")]
    DuplicatePoint {
        first: usize,
        second: usize,
        tolerance: f64,
    },
    #[error("centroids {first} and {second} coincide within tolerance {tolerance:e}")]
    DuplicateCentroid {
        first: usize,
        second: usize,
        tolerance: f64,
    },
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("point index {index} out of range (n = {len})")]
    IndexOutOfRange { index: usize, len: usize },
}

/// A point of `R^d` with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self, GeometryError> {
        if coords.is_empty() {
            return Err(GeometryError::EmptyCoordinates);
        }
        for (index, c) in coords.iter().enumerate() {
            if !c.is_finite() {
                return Err(GeometryError::NonFiniteCoordinate { index });
            }
        }
        Ok(Point { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// Euclidean distance between two points of equal dimension.
///
/// Exactly `0.0` when the coordinate vectors are identical.
pub fn distance(x: &Point, c: &Point) -> Result<f64, GeometryError> {
    if x.dim() != c.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: x.dim(),
            found: c.dim(),
        });
    }
    Ok(dist_slices(x.coords(), c.coords()))
}

pub(crate) fn dist_slices(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt()
}

fn max_pairwise_distance(points: &[Point]) -> f64 {
    let mut max = 0.0f64;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            max = max.max(dist_slices(points[i].coords(), points[j].coords()));
        }
    }
    max
}

fn check_shared_dim(points: &[Point]) -> Result<usize, GeometryError> {
    let dim = points[0].dim();
    for p in points {
        if p.dim() != dim {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
    }
    Ok(dim)
}

/// The fixed centroids `S = {c_1, ..., c_k}`. Pairwise distinct, shared dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidSet {
    centroids: Vec<Point>,
    dim: usize,
}

impl CentroidSet {
    pub fn new(centroids: Vec<Point>) -> Result<Self, GeometryError> {
        if centroids.is_empty() {
            return Err(GeometryError::EmptyCentroidSet);
        }
        let dim = check_shared_dim(&centroids)?;
        let tolerance = DEFAULT_TOLERANCE_SCALE * (1.0 + max_pairwise_distance(&centroids));
        for i in 0..centroids.len() {
            for j in i + 1..centroids.len() {
                if dist_slices(centroids[i].coords(), centroids[j].coords()) <= tolerance {
                    return Err(GeometryError::DuplicateCentroid {
                        first: i,
                        second: j,
                        tolerance,
                    });
                }
            }
        }
        Ok(CentroidSet { centroids, dim })
    }

    pub fn len(&self) -> usize {
        self.centroids.len()
    }

    pub fn is_empty(&self) -> bool {
        false // k >= 1 by construction
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn centroids(&self) -> &[Point] {
        &self.centroids
    }

    pub fn get(&self, i: usize) -> &Point {
        &self.centroids[i]
    }
}

/// The finite analysis set `X = {x_1, ..., x_n}`. Indices are stable identities:
/// every witness, trace, path, and orbit downstream refers to positions in this
/// list, never to coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfiguration {
    points: Vec<Point>,
    dim: usize,
}

impl PointConfiguration {
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::EmptyPointSet);
        }
        let dim = check_shared_dim(&points)?;
        let tolerance = DEFAULT_TOLERANCE_SCALE * (1.0 + max_pairwise_distance(&points));
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if dist_slices(points[i].coords(), points[j].coords()) <= tolerance {
                    return Err(GeometryError::DuplicatePoint {
                        first: i,
                        second: j,
                        tolerance,
                    });
                }
            }
        }
        Ok(PointConfiguration { points, dim })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn get(&self, i: usize) -> &Point {
        &self.points[i]
    }
}

/// Default grouping tolerance for a configuration/centroid pair:
/// `1e-9 * (1 + max_{i,j} ||x_j - c_i||)`. Relative scaling keeps grouping
/// stable across coordinate scales.
pub fn default_grouping_tolerance(
    x: &PointConfiguration,
    s: &CentroidSet,
) -> Result<f64, GeometryError> {
    if x.dim() != s.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: x.dim(),
            found: s.dim(),
        });
    }
    let mut max = 0.0f64;
    for p in x.points() {
        for c in s.centroids() {
            max = max.max(dist_slices(p.coords(), c.coords()));
        }
    }
    Ok(DEFAULT_TOLERANCE_SCALE * (1.0 + max))
}

/// One distance level of one centroid: a representative value and the points
/// (by index) lying at that distance, within the grouping tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelGroup {
    /// Representative distance value (the smallest in the group).
    pub value: f64,
    /// Member point indices, ascending.
    pub members: Vec<usize>,
}

/// Per-centroid partition of the point indices by (near-)equal distance.
#[derive(Debug, Clone)]
pub struct DistanceLevelGrouping {
    levels: Vec<Vec<LevelGroup>>,
    level_of: Vec<Vec<usize>>,
    tolerance: f64,
    n_points: usize,
}

impl DistanceLevelGrouping {
    pub fn n_centroids(&self) -> usize {
        self.levels.len()
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// The levels of centroid `i`, ascending by representative value.
    pub fn levels(&self, i: usize) -> &[LevelGroup] {
        &self.levels[i]
    }

    /// Level index of point `j` with respect to centroid `i`.
    pub fn level_of(&self, i: usize, j: usize) -> usize {
        self.level_of[i][j]
    }

    /// Number of distinct levels for centroid `i` (the value `s_i`).
    pub fn levels_per_centroid(&self, i: usize) -> usize {
        self.levels[i].len()
    }

    /// Total level count `s = sum_i s_i`.
    pub fn total_levels(&self) -> usize {
        self.levels.iter().map(|l| l.len()).sum()
    }
}

/// Partition of distances into levels by sorted-gap splitting: sort the
/// distances and split wherever the gap between consecutive values exceeds
/// `tol`. A chain of sub-tolerance gaps merges into one level, so a group may
/// span more than `tol` in total; adequate away from adversarial inputs.
pub(crate) fn split_into_groups(dists: &[(f64, usize)], tol: f64) -> Vec<LevelGroup> {
    let mut sorted: Vec<(f64, usize)> = dists.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("distances are finite"));
    let mut groups: Vec<LevelGroup> = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for &(value, index) in &sorted {
        if groups.is_empty() || value - prev > tol {
            groups.push(LevelGroup {
                value,
                members: vec![index],
            });
        } else {
            groups.last_mut().expect("nonempty").members.push(index);
        }
        prev = value;
    }
    for g in &mut groups {
        g.members.sort_unstable();
    }
    groups
}

/// Groups the distances `||x_j - c_i||` into levels per centroid.
pub fn group_levels(
    x: &PointConfiguration,
    s: &CentroidSet,
    tol: f64,
) -> Result<DistanceLevelGrouping, GeometryError> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(GeometryError::InvalidTolerance(tol));
    }
    if x.dim() != s.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: x.dim(),
            found: s.dim(),
        });
    }
    let n = x.len();
    let mut levels = Vec::with_capacity(s.len());
    let mut level_of = Vec::with_capacity(s.len());
    for c in s.centroids() {
        let dists: Vec<(f64, usize)> = x
            .points()
            .iter()
            .enumerate()
            .map(|(j, p)| (dist_slices(p.coords(), c.coords()), j))
            .collect();
        let groups = split_into_groups(&dists, tol);
        let mut lookup = vec![usize::MAX; n];
        for (gi, g) in groups.iter().enumerate() {
            for &m in &g.members {
                lookup[m] = gi;
            }
        }
        levels.push(groups);
        level_of.push(lookup);
    }
    Ok(DistanceLevelGrouping {
        levels,
        level_of,
        tolerance: tol,
        n_points: n,
    })
}

/// Label of one incidence row: level `level` of centroid `centroid`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowLabel {
    pub centroid: usize,
    pub level: usize,
}

/// The 0/1 system derived from a grouping: one row per (centroid, level),
/// one column per point; entry 1 iff the point lies on that level. Every
/// column has exactly one 1 per centroid, so column sums equal k.
#[derive(Debug, Clone)]
pub struct IncidenceMatrix {
    entries: Vec<Vec<u8>>,
    labels: Vec<RowLabel>,
    n_points: usize,
}

impl IncidenceMatrix {
    pub fn n_rows(&self) -> usize {
        self.entries.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_points
    }

    pub fn entry(&self, row: usize, col: usize) -> u8 {
        self.entries[row][col]
    }

    pub fn row(&self, row: usize) -> &[u8] {
        &self.entries[row]
    }

    pub fn label(&self, row: usize) -> RowLabel {
        self.labels[row]
    }

    /// Member columns (point indices) of a row.
    pub fn row_members(&self, row: usize) -> Vec<usize> {
        self.entries[row]
            .iter()
            .enumerate()
            .filter(|(_, &e)| e == 1)
            .map(|(j, _)| j)
            .collect()
    }

    /// Rows as signed integers, for exact elimination.
    pub fn integer_rows(&self) -> Vec<Vec<i64>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|&e| i64::from(e)).collect())
            .collect()
    }
}

/// Expands a grouping into its incidence matrix. Rows are ordered centroid by
/// centroid, levels ascending.
pub fn incidence_matrix(grouping: &DistanceLevelGrouping) -> IncidenceMatrix {
    let n = grouping.n_points();
    let mut entries = Vec::with_capacity(grouping.total_levels());
    let mut labels = Vec::with_capacity(grouping.total_levels());
    for i in 0..grouping.n_centroids() {
        for (li, group) in grouping.levels(i).iter().enumerate() {
            let mut row = vec![0u8; n];
            for &m in &group.members {
                row[m] = 1;
            }
            entries.push(row);
            labels.push(RowLabel {
                centroid: i,
                level: li,
            });
        }
    }
    IncidenceMatrix {
        entries,
        labels,
        n_points: n,
    }
}

/// Axis-aligned lattice of points over a box, row-major order. Used for
/// free-centroid placement in fitting experiments.
pub fn lattice(min: &[f64], max: &[f64], counts: &[usize]) -> Result<Vec<Point>, GeometryError> {
    if min.is_empty() || min.len() != max.len() || min.len() != counts.len() {
        return Err(GeometryError::DimensionMismatch {
            expected: min.len(),
            found: max.len().max(counts.len()),
        });
    }
    let dim = min.len();
    let axis: Vec<Vec<f64>> = (0..dim)
        .map(|a| {
            let c = counts[a].max(1);
            (0..c)
                .map(|i| {
                    if c == 1 {
                        0.5 * (min[a] + max[a])
                    } else {
                        min[a] + (max[a] - min[a]) * i as f64 / (c - 1) as f64
                    }
                })
                .collect()
        })
        .collect();
    let total: usize = axis.iter().map(|v| v.len()).product();
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; dim];
    for _ in 0..total {
        let coords: Vec<f64> = (0..dim).map(|a| axis[a][idx[a]]).collect();
        out.push(Point::new(coords)?);
        for a in (0..dim).rev() {
            idx[a] += 1;
            if idx[a] < axis[a].len() {
                break;
            }
            idx[a] = 0;
        }
    }
    Ok(out)
}
