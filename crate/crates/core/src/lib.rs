//! Shifted radial basis function networks and the geometry that governs
//! their reach.
//!
//! A shifted RBF network is a sum of terms `w * g(||x - c|| - nu)`: radial
//! units whose distance argument is offset by a shift instead of divided by a
//! width. This crate provides
//!
//! - evaluation and dictionary-based least-squares fitting of such networks
//!   ([`network`]), together with a registry of activation functions and a
//!   numeric classifier for the hypotheses under which density results hold
//!   ([`activations`]);
//! - exact detection of *cycles*: finite point sets that admit a nonzero
//!   integer weighting summing to zero on every distance level of every
//!   centroid ([`cycles`]). Cycles are the obstruction to approximating
//!   arbitrary data with radial sums around fixed centroids;
//! - certified lower bounds on the uniform approximation error over a fixed
//!   centroid set, built from annihilating functionals on cycle supports
//!   ([`duality`]).
//!
//! ```
//! use rbfnet::geometry::{CentroidSet, Point, PointConfiguration, default_grouping_tolerance};
//! use rbfnet::cycles::detect_cycle;
//!
//! let x = PointConfiguration::new(vec![
//!     Point::new(vec![2.0, 1.0]).unwrap(),
//!     Point::new(vec![2.0, -1.0]).unwrap(),
//! ]).unwrap();
//! let s = CentroidSet::new(vec![
//!     Point::new(vec![0.0, 0.0]).unwrap(),
//!     Point::new(vec![4.0, 0.0]).unwrap(),
//! ]).unwrap();
//! let tol = default_grouping_tolerance(&x, &s).unwrap();
//!
//! // Two points mirrored across the axis through both centroids: every
//! // distance level holds both points, so the pair is a cycle.
//! let witness = detect_cycle(&x, &s, tol).unwrap().unwrap();
//! assert_eq!(witness.lambda(), &[1, -1]);
//! ```

pub mod activations;
pub mod cycles;
pub mod duality;
pub mod exact;
pub mod geometry;
pub mod io;
pub mod network;
pub mod quadrature;

pub use activations::{builtin, classify, funahashi_transform, Activation, HypothesisReport};
pub use cycles::{
    detect_cycle, find_closed_path, orbits, path_witness, tau_fixpoint, tau_step, verify_witness,
    ClosedPath, CycleWitness, OrbitPartition, TauTrace,
};
pub use duality::{check_annihilation, AnnihilatingFunctional};
pub use geometry::{
    default_grouping_tolerance, distance, group_levels, incidence_matrix, CentroidSet,
    DistanceLevelGrouping, IncidenceMatrix, Point, PointConfiguration,
};
pub use network::{
    build_dictionary, fit_least_squares, greedy_fit, uniform_error, ClassicRbfModel, Dictionary,
    EvaluationGrid, ShiftGrid, ShiftedRbfModel,
};
