//! Cycle detection in finite point configurations with respect to fixed
//! centroids.
//!
//! A configuration contains a *cycle* when some nonzero integer vector
//! `lambda` sums to zero over every distance level of every centroid. The
//! decision is exact: the 0/1 incidence system is reduced by
//! integer-preserving elimination, so no floating point enters after the
//! distance grouping itself.
//!
//! For two centroids the structure is a bipartite level multigraph (levels of
//! `c1` on one side, levels of `c2` on the other, one edge per point), and
//! cycles coincide with *closed paths*: even-length point sequences that
//! alternate between equal-distance relations. Connected components of the
//! same graph are the *orbits*.

use crate::exact;
use crate::geometry::{
    group_levels, incidence_matrix, CentroidSet, DistanceLevelGrouping, GeometryError,
    PointConfiguration,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CycleError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("witness length {found} does not match point count {expected}")]
    WitnessLengthMismatch { expected: usize, found: usize },
    #[error("the zero vector is not a valid witness")]
    ZeroWitness,
    #[error("operation requires exactly 2 centroids, got {0}")]
    RequiresTwoCentroids(usize),
    #[error("subset index {index} out of range (n = {len})")]
    SubsetOutOfRange { index: usize, len: usize },
    #[error("invalid closed path: {0}")]
    InvalidPath(String),
    #[error("witness entries exceed i64 range")]
    WitnessOverflow,
}

/// A canonical integer witness `lambda` for a cycle: nonzero, gcd 1, first
/// nonzero entry positive. Entries may be zero; the support is the contained
/// cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    lambda: Vec<i64>,
}

impl CycleWitness {
    /// Canonicalizes `lambda` (gcd-reduce, sign-normalize). Errors on the
    /// zero vector.
    pub fn new(lambda: Vec<i64>) -> Result<Self, CycleError> {
        if lambda.iter().all(|&e| e == 0) {
            return Err(CycleError::ZeroWitness);
        }
        let mut big: Vec<num::BigInt> = lambda.iter().map(|&e| num::BigInt::from(e)).collect();
        exact::canonicalize(&mut big);
        let lambda = exact::to_i64_vector(&big).ok_or(CycleError::WitnessOverflow)?;
        Ok(CycleWitness { lambda })
    }

    pub fn lambda(&self) -> &[i64] {
        &self.lambda
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    /// Indices with nonzero weight.
    pub fn support(&self) -> Vec<usize> {
        self.lambda
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Decides whether `X` is a cycle with respect to `S` and returns a witness.
///
/// The incidence system has a nontrivial rational null space iff it has a
/// nontrivial integer one, so the decision is rank(A) < n by exact
/// elimination; the returned witness is a primitive integer null vector.
pub fn detect_cycle(
    x: &PointConfiguration,
    s: &CentroidSet,
    tol: f64,
) -> Result<Option<CycleWitness>, CycleError> {
    let grouping = group_levels(x, s, tol)?;
    let matrix = incidence_matrix(&grouping);
    let ech = exact::row_echelon(&matrix.integer_rows());
    match exact::null_space_vector(&ech) {
        None => Ok(None),
        Some(v) => {
            let lambda = exact::to_i64_vector(&v).ok_or(CycleError::WitnessOverflow)?;
            Ok(Some(CycleWitness::new(lambda)?))
        }
    }
}

/// Checks Eq.-style annihilation directly: for every level group of every
/// centroid, the integer sum of `lambda` over the group members must be
/// exactly zero. The zero vector is rejected as invalid input.
pub fn verify_witness(
    x: &PointConfiguration,
    s: &CentroidSet,
    lambda: &[i64],
    tol: f64,
) -> Result<bool, CycleError> {
    if lambda.len() != x.len() {
        return Err(CycleError::WitnessLengthMismatch {
            expected: x.len(),
            found: lambda.len(),
        });
    }
    if lambda.iter().all(|&e| e == 0) {
        return Err(CycleError::ZeroWitness);
    }
    let grouping = group_levels(x, s, tol)?;
    for i in 0..grouping.n_centroids() {
        for group in grouping.levels(i) {
            let sum: i64 = group.members.iter().map(|&j| lambda[j]).sum();
            if sum != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn validate_subset(z: &[usize], n: usize) -> Result<Vec<usize>, CycleError> {
    let mut sorted = z.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if let Some(&index) = sorted.iter().find(|&&i| i >= n) {
        return Err(CycleError::SubsetOutOfRange { index, len: n });
    }
    Ok(sorted)
}

/// One application of the tau operator: keeps the members of `Z` that, for
/// EVERY centroid, share their distance level with at least one other member
/// of `Z`. Grouping is recomputed restricted to `Z`, matching the set-function
/// definition on `Z`.
pub fn tau_step(
    z: &[usize],
    x: &PointConfiguration,
    s: &CentroidSet,
    tol: f64,
) -> Result<Vec<usize>, CycleError> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(GeometryError::InvalidTolerance(tol).into());
    }
    if x.dim() != s.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: x.dim(),
            found: s.dim(),
        }
        .into());
    }
    let z = validate_subset(z, x.len())?;
    if z.is_empty() {
        return Ok(z);
    }
    let mut survives = vec![true; z.len()];
    for c in s.centroids() {
        let dists: Vec<(f64, usize)> = z
            .iter()
            .enumerate()
            .map(|(pos, &j)| {
                (
                    crate::geometry::dist_slices(x.get(j).coords(), c.coords()),
                    pos,
                )
            })
            .collect();
        for group in crate::geometry::split_into_groups(&dists, tol) {
            if group.members.len() < 2 {
                for pos in group.members {
                    survives[pos] = false;
                }
            }
        }
    }
    Ok(z
        .iter()
        .zip(&survives)
        .filter(|(_, &keep)| keep)
        .map(|(&j, _)| j)
        .collect())
}

/// The decreasing chain `Z ⊇ tau(Z) ⊇ tau²(Z) ⊇ ...` down to its fixpoint.
///
/// An empty terminal certifies that `Z` contains no cycle. A nonempty
/// terminal is inconclusive on its own (emptiness is sufficient, not
/// necessary-and-sufficient); pair it with [`detect_cycle`] for a decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauTrace {
    /// The iterates, starting with `Z` itself. Strictly decreasing until the
    /// last step; the last two entries are equal (fixpoint) or the last entry
    /// is empty.
    pub iterates: Vec<Vec<usize>>,
    /// The terminal set (possibly empty).
    pub terminal: Vec<usize>,
    /// Number of tau applications performed.
    pub steps: usize,
}

impl TauTrace {
    pub fn certifies_cycle_free(&self) -> bool {
        self.terminal.is_empty()
    }
}

/// Iterates [`tau_step`] until the subset stabilizes or empties.
pub fn tau_fixpoint(
    z: &[usize],
    x: &PointConfiguration,
    s: &CentroidSet,
    tol: f64,
) -> Result<TauTrace, CycleError> {
    let z = validate_subset(z, x.len())?;
    let mut iterates = vec![z];
    loop {
        let last = iterates.last().expect("nonempty");
        if last.is_empty() {
            break;
        }
        let next = tau_step(last, x, s, tol)?;
        let fixed = next == *last;
        iterates.push(next);
        if fixed {
            break;
        }
    }
    let steps = iterates.len() - 1;
    let terminal = iterates.last().expect("nonempty").clone();
    Ok(TauTrace {
        iterates,
        terminal,
        steps,
    })
}

/// Which centroid relates the first two points of a closed path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathRelation {
    /// Equal distance to the first centroid.
    Centroid1,
    /// Equal distance to the second centroid.
    Centroid2,
}

impl PathRelation {
    fn flip(self) -> Self {
        match self {
            PathRelation::Centroid1 => PathRelation::Centroid2,
            PathRelation::Centroid2 => PathRelation::Centroid1,
        }
    }
}

/// An even-length point sequence alternating between equal-distance
/// relations to `c1` and `c2`, closing back on itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedPath {
    /// Point indices along the path.
    pub points: Vec<usize>,
    /// Relation linking `points[0]` to `points[1]`; subsequent links
    /// alternate, and the closing link continues the alternation.
    pub start_relation: PathRelation,
}

/// Level multigraph for two centroids: vertices are the levels of `c1`
/// followed by the levels of `c2`; every point is one edge.
struct LevelGraph {
    s1: usize,
    /// Per vertex: (point index, other endpoint), sorted by point index.
    adjacency: Vec<Vec<(usize, usize)>>,
    /// Per point: its two endpoints (c1-level vertex, c2-level vertex).
    endpoints: Vec<(usize, usize)>,
}

impl LevelGraph {
    fn build(grouping: &DistanceLevelGrouping) -> Self {
        let s1 = grouping.levels_per_centroid(0);
        let s2 = grouping.levels_per_centroid(1);
        let n = grouping.n_points();
        let mut adjacency = vec![Vec::new(); s1 + s2];
        let mut endpoints = Vec::with_capacity(n);
        for j in 0..n {
            let u = grouping.level_of(0, j);
            let v = s1 + grouping.level_of(1, j);
            adjacency[u].push((j, v));
            adjacency[v].push((j, u));
            endpoints.push((u, v));
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        LevelGraph {
            s1,
            adjacency,
            endpoints,
        }
    }

    fn n_vertices(&self) -> usize {
        self.adjacency.len()
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Color {
    White,
    Gray,
    Black,
}

/// Depth-first search for a cycle in the level multigraph. Returns the cycle
/// as (vertex walk, edge walk): the walk starts and ends at the anchor vertex
/// and edge `i` joins walk vertex `i` to walk vertex `i+1 (mod len)`.
fn find_graph_cycle(graph: &LevelGraph) -> Option<(Vec<usize>, Vec<usize>)> {
    let v_count = graph.n_vertices();
    let mut color = vec![Color::White; v_count];
    // parent[v] = (parent vertex, edge used to enter v)
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; v_count];

    for root in 0..v_count {
        if color[root] != Color::White {
            continue;
        }
        // Iterative DFS; stack holds (vertex, adjacency cursor).
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        color[root] = Color::Gray;
        while !stack.is_empty() {
            let (u, cursor) = {
                let frame = stack.last_mut().expect("nonempty");
                let u = frame.0;
                if frame.1 == graph.adjacency[u].len() {
                    color[u] = Color::Black;
                    stack.pop();
                    continue;
                }
                let c = frame.1;
                frame.1 += 1;
                (u, c)
            };
            let (edge, v) = graph.adjacency[u][cursor];
            if parent[u].map(|(_, e)| e) == Some(edge) {
                continue; // the edge we came in by
            }
            match color[v] {
                Color::White => {
                    parent[v] = Some((u, edge));
                    color[v] = Color::Gray;
                    stack.push((v, 0));
                }
                Color::Gray => {
                    // Back edge to an ancestor: walk the parent chain from u
                    // up to v, then close with this edge.
                    let mut vertices = vec![u];
                    let mut edges = Vec::new();
                    let mut w = u;
                    while w != v {
                        let (pw, pe) = parent[w].expect("ancestor chain");
                        edges.push(pe);
                        vertices.push(pw);
                        w = pw;
                    }
                    vertices.reverse(); // v ... u
                    edges.reverse(); // tree edges v -> u
                    edges.push(edge); // closing edge u -> v
                    return Some((vertices, edges));
                }
                Color::Black => {}
            }
        }
    }
    None
}

/// Finds a closed alternating path with respect to exactly two centroids, or
/// `None` when the level graph is a forest with no parallel edges.
///
/// Traversal is depth-first with lowest-index tie-breaking, so the result is
/// deterministic for a given input order.
pub fn find_closed_path(
    x: &PointConfiguration,
    s: &CentroidSet,
    tol: f64,
) -> Result<Option<ClosedPath>, CycleError> {
    if s.len() != 2 {
        return Err(CycleError::RequiresTwoCentroids(s.len()));
    }
    let grouping = group_levels(x, s, tol)?;
    let graph = LevelGraph::build(&grouping);
    let Some((vertices, edges)) = find_graph_cycle(&graph) else {
        return Ok(None);
    };
    // Points along the cycle are the edges in walk order; the relation
    // between consecutive points is the side of the vertex between them.
    let points = edges;
    let between = vertices[1];
    let start_relation = if between < graph.s1 {
        PathRelation::Centroid1
    } else {
        PathRelation::Centroid2
    };
    debug_assert_eq!(points.len() % 2, 0, "bipartite cycles have even length");
    Ok(Some(ClosedPath {
        points,
        start_relation,
    }))
}

/// The alternating-sign witness of a closed path, canonicalized. `n` is the
/// configuration size the witness indexes into.
pub fn path_witness(path: &ClosedPath, n: usize) -> Result<CycleWitness, CycleError> {
    let m = path.points.len();
    if m < 2 || m % 2 != 0 {
        return Err(CycleError::InvalidPath(format!(
            "length must be even and >= 2, got {m}"
        )));
    }
    let mut lambda = vec![0i64; n];
    for (i, &p) in path.points.iter().enumerate() {
        if p >= n {
            return Err(CycleError::SubsetOutOfRange { index: p, len: n });
        }
        if lambda[p] != 0 {
            return Err(CycleError::InvalidPath(format!(
                "point {p} appears more than once"
            )));
        }
        if path.points[(i + 1) % m] == p {
            return Err(CycleError::InvalidPath(format!(
                "consecutive points equal at position {i}"
            )));
        }
        lambda[p] = if i % 2 == 0 { -1 } else { 1 };
    }
    CycleWitness::new(lambda)
}

/// Partition of the points into orbits: connected components of the
/// two-centroid level graph, mapped back to point indices. Orbits are sorted
/// by smallest member; members ascend.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    pub orbits: Vec<Vec<usize>>,
}

impl OrbitPartition {
    /// Orbit index containing a point.
    pub fn orbit_of(&self, point: usize) -> Option<usize> {
        self.orbits.iter().position(|o| o.contains(&point))
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len).collect(),
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Computes the orbits of a two-centroid configuration.
pub fn orbits(
    x: &PointConfiguration,
    s: &CentroidSet,
    tol: f64,
) -> Result<OrbitPartition, CycleError> {
    if s.len() != 2 {
        return Err(CycleError::RequiresTwoCentroids(s.len()));
    }
    let grouping = group_levels(x, s, tol)?;
    let graph = LevelGraph::build(&grouping);
    let mut uf = UnionFind::new(graph.n_vertices());
    for &(u, v) in &graph.endpoints {
        uf.union(u, v);
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (j, &(u, _)) in graph.endpoints.iter().enumerate() {
        groups.entry(uf.find(u)).or_default().push(j);
    }
    let mut orbits: Vec<Vec<usize>> = groups.into_values().collect();
    orbits.sort_by_key(|o| o[0]);
    Ok(OrbitPartition { orbits })
}

/// Checks that a closed path satisfies its alternation invariants against the
/// actual distance grouping. Mostly a test aid, but useful for report
/// validation too.
pub fn validate_closed_path(
    path: &ClosedPath,
    x: &PointConfiguration,
    s: &CentroidSet,
    tol: f64,
) -> Result<bool, CycleError> {
    if s.len() != 2 {
        return Err(CycleError::RequiresTwoCentroids(s.len()));
    }
    let m = path.points.len();
    if m < 2 || m % 2 != 0 {
        return Ok(false);
    }
    let grouping = group_levels(x, s, tol)?;
    let mut relation = path.start_relation;
    for i in 0..m {
        let a = path.points[i];
        let b = path.points[(i + 1) % m];
        if a == b || a >= x.len() || b >= x.len() {
            return Ok(false);
        }
        let centroid = match relation {
            PathRelation::Centroid1 => 0,
            PathRelation::Centroid2 => 1,
        };
        if grouping.level_of(centroid, a) != grouping.level_of(centroid, b) {
            return Ok(false);
        }
        relation = relation.flip();
    }
    Ok(true)
}
