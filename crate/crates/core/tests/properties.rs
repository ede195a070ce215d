//! Property tests for the structural invariants of grouping, incidence,
//! witnesses, and model evaluation.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rbfnet::activations::builtin;
use rbfnet::cycles::{detect_cycle, verify_witness};
use rbfnet::duality::AnnihilatingFunctional;
use rbfnet::geometry::{
    default_grouping_tolerance, group_levels, incidence_matrix, CentroidSet, Point,
    PointConfiguration,
};
use rbfnet::network::{
    build_dictionary, fit_least_squares, ClassicRbfModel, ClassicRbfTerm, EvaluationGrid,
    RbfTerm, ShiftGrid, ShiftedRbfModel,
};

fn pt(coords: &[f64]) -> Point {
    Point::new(coords.to_vec()).unwrap()
}

fn arb_coords(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-5.0..5.0f64, 2), len)
}

/// Builds a configuration, silently discarding degenerate draws.
fn try_instance(
    points: Vec<Vec<f64>>,
    centroids: Vec<Vec<f64>>,
) -> Option<(PointConfiguration, CentroidSet, f64)> {
    let x = PointConfiguration::new(points.into_iter().map(|c| pt(&c)).collect()).ok()?;
    let s = CentroidSet::new(centroids.into_iter().map(|c| pt(&c)).collect()).ok()?;
    let tol = default_grouping_tolerance(&x, &s).ok()?;
    Some((x, s, tol))
}

proptest! {
    #[test]
    fn incidence_column_sums_equal_centroid_count(
        points in arb_coords(1..8),
        centroids in arb_coords(1..4),
    ) {
        let Some((x, s, tol)) = try_instance(points, centroids) else { return Ok(()); };
        let m = incidence_matrix(&group_levels(&x, &s, tol).unwrap());
        for col in 0..m.n_cols() {
            let sum: u32 = (0..m.n_rows()).map(|r| u32::from(m.entry(r, col))).sum();
            prop_assert_eq!(sum as usize, s.len());
        }
        // every row nonempty
        for r in 0..m.n_rows() {
            prop_assert!(m.row(r).iter().any(|&e| e == 1));
        }
    }

    #[test]
    fn grouping_is_permutation_equivariant(
        points in arb_coords(2..8),
        centroids in arb_coords(1..4),
        seed in any::<u64>(),
    ) {
        let Some((x, s, tol)) = try_instance(points.clone(), centroids) else { return Ok(()); };
        let n = x.len();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let permuted = PointConfiguration::new(
            perm.iter().map(|&j| x.get(j).clone()).collect(),
        ).unwrap();

        let g_orig = group_levels(&x, &s, tol).unwrap();
        let g_perm = group_levels(&permuted, &s, tol).unwrap();
        // inverse map: original index j sits at position pos[j] in `permuted`
        let mut pos = vec![0usize; n];
        for (p, &j) in perm.iter().enumerate() {
            pos[j] = p;
        }
        for i in 0..s.len() {
            let mut mapped: Vec<Vec<usize>> = g_orig.levels(i).iter().map(|lvl| {
                let mut m: Vec<usize> = lvl.members.iter().map(|&j| pos[j]).collect();
                m.sort_unstable();
                m
            }).collect();
            let mut actual: Vec<Vec<usize>> =
                g_perm.levels(i).iter().map(|lvl| lvl.members.clone()).collect();
            mapped.sort();
            actual.sort();
            prop_assert_eq!(mapped, actual);
        }
    }

    #[test]
    fn detected_witnesses_verify(
        points in arb_coords(1..7),
        mirror in any::<bool>(),
    ) {
        // Centroids on the x axis; optionally mirror the first point across
        // the axis to provoke a 2-point cycle.
        let mut points = points;
        if mirror {
            let p0 = points[0].clone();
            points.push(vec![p0[0], -p0[1]]);
        }
        let Some((x, s, tol)) = try_instance(
            points,
            vec![vec![0.0, 0.0], vec![4.0, 0.0]],
        ) else { return Ok(()); };
        if let Some(w) = detect_cycle(&x, &s, tol).unwrap() {
            prop_assert!(verify_witness(&x, &s, w.lambda(), tol).unwrap());
            // canonical form: gcd 1, first nonzero entry positive
            let first = w.lambda().iter().find(|&&e| e != 0).copied().unwrap();
            prop_assert!(first > 0);
            let f = AnnihilatingFunctional::from_witness(&x, &s, &w, tol).unwrap();
            prop_assert!(f.norm() > 0);
            // rescaling lambda leaves the bound unchanged
            let target = f.worst_case_target();
            let b1 = f.lower_bound(&target).unwrap();
            let scaled = rbfnet::cycles::CycleWitness::new(
                w.lambda().iter().map(|&e| e * 5).collect(),
            ).unwrap();
            let f5 = AnnihilatingFunctional::from_witness(&x, &s, &scaled, tol).unwrap();
            let b5 = f5.lower_bound(&f5.worst_case_target()).unwrap();
            prop_assert!((b1 - b5).abs() < 1e-12);
        }
    }

    #[test]
    fn classic_sigma_one_matches_shifted_nu_zero(
        centroid in prop::collection::vec(-3.0..3.0f64, 2),
        weight in -5.0..5.0f64,
        sample in prop::collection::vec(-4.0..4.0f64, 2),
    ) {
        let g = builtin("gaussian").unwrap();
        let classic = ClassicRbfModel::new(vec![ClassicRbfTerm {
            weight,
            centroid: pt(&centroid),
            smoothing: 1.0,
        }], g.clone()).unwrap();
        let shifted = ShiftedRbfModel::new(vec![RbfTerm {
            weight,
            centroid: pt(&centroid),
            shift: 0.0,
        }], g).unwrap();
        let x = pt(&sample);
        prop_assert_eq!(
            classic.evaluate(&x).unwrap().to_bits(),
            shifted.evaluate(&x).unwrap().to_bits()
        );
    }

    #[test]
    fn superset_dictionary_never_fits_worse(
        targets in prop::collection::vec(-2.0..2.0f64, 9),
        extra_shifts in 1..4usize,
    ) {
        let samples: Vec<Point> = (0..9)
            .map(|i| pt(&[(i % 3) as f64, (i / 3) as f64]))
            .collect();
        let grid = EvaluationGrid::with_targets(samples, targets).unwrap();
        let centroids = [pt(&[0.5, 0.5]), pt(&[2.0, 1.0])];
        let g = builtin("gaussian").unwrap();
        let base = 4usize;
        let small = build_dictionary(
            &centroids,
            ShiftGrid::new(-1.0, 2.0, base).unwrap(),
            g.clone(),
        ).unwrap();
        // Refining the same range by an integer factor keeps the original
        // atoms as a subset.
        let count = (base - 1) * (extra_shifts + 1) + 1;
        let large = build_dictionary(
            &centroids,
            ShiftGrid::new(-1.0, 2.0, count).unwrap(),
            g,
        ).unwrap();
        let (_, rep_small) = fit_least_squares(&small, &grid, 0.0).unwrap();
        let (_, rep_large) = fit_least_squares(&large, &grid, 0.0).unwrap();
        let rss_small = rep_small.rms_error * rep_small.rms_error;
        let rss_large = rep_large.rms_error * rep_large.rms_error;
        prop_assert!(rss_large <= rss_small + 1e-10,
            "refined dictionary regressed: {rss_large} > {rss_small}");
    }
}

#[test]
fn exact_duplicate_distances_group_identically_for_any_order() {
    // Mirrored pair: distances to both centroids are bit-identical, so even a
    // near-zero tolerance groups them together regardless of input order.
    let s = CentroidSet::new(vec![pt(&[0.0, 0.0]), pt(&[4.0, 0.0])]).unwrap();
    let forward = PointConfiguration::new(vec![pt(&[2.0, 1.0]), pt(&[2.0, -1.0]), pt(&[1.0, 0.5])])
        .unwrap();
    let backward = PointConfiguration::new(vec![pt(&[1.0, 0.5]), pt(&[2.0, -1.0]), pt(&[2.0, 1.0])])
        .unwrap();
    let tol = 1e-15;
    let gf = group_levels(&forward, &s, tol).unwrap();
    let gb = group_levels(&backward, &s, tol).unwrap();
    // the mirrored points (indices 0,1 forward / 2,1 backward) share a level
    assert_eq!(gf.level_of(0, 0), gf.level_of(0, 1));
    assert_eq!(gb.level_of(0, 2), gb.level_of(0, 1));
    assert_eq!(gf.total_levels(), gb.total_levels());
}
