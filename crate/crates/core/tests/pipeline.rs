//! End-to-end invariants across modules: exact detection against a
//! brute-force oracle, closed-path consistency, tau behavior on cycle
//! supports, annihilation of random models, and the certified lower bound
//! against actual fits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rbfnet::activations::{builtin, BUILTIN_NAMES};
use rbfnet::cycles::{
    detect_cycle, find_closed_path, path_witness, tau_fixpoint, verify_witness,
};
use rbfnet::duality::{check_annihilation, AnnihilatingFunctional};
use rbfnet::geometry::{
    default_grouping_tolerance, distance, CentroidSet, Point, PointConfiguration,
};
use rbfnet::network::{build_dictionary, fit_least_squares, EvaluationGrid, RbfTerm, ShiftGrid, ShiftedRbfModel};

fn pt(coords: &[f64]) -> Point {
    Point::new(coords.to_vec()).unwrap()
}

// ---------------------------------------------------------------------------
// Independent brute-force oracle
// ---------------------------------------------------------------------------

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt()
}

/// Level groups by plain sorted-gap splitting, written independently of the
/// library path it cross-checks.
fn oracle_groups(points: &[Vec<f64>], centroids: &[Vec<f64>], tol: f64) -> Vec<Vec<usize>> {
    let mut groups = Vec::new();
    for c in centroids {
        let mut dist_idx: Vec<(f64, usize)> = points
            .iter()
            .enumerate()
            .map(|(j, p)| (euclid(p, c), j))
            .collect();
        dist_idx.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut current = vec![dist_idx[0].1];
        for w in dist_idx.windows(2) {
            if w[1].0 - w[0].0 > tol {
                groups.push(current);
                current = vec![w[1].1];
            } else {
                current.push(w[1].1);
            }
        }
        groups.push(current);
    }
    groups
}

/// Brute-force cycle decision: enumerate every lambda in {-3..3}^n \ {0} and
/// test the level sums directly.
fn oracle_has_cycle(points: &[Vec<f64>], centroids: &[Vec<f64>], tol: f64) -> bool {
    let n = points.len();
    let groups = oracle_groups(points, centroids, tol);
    let mut lambda = vec![-3i64; n];
    loop {
        if lambda.iter().any(|&l| l != 0)
            && groups
                .iter()
                .all(|g| g.iter().map(|&j| lambda[j]).sum::<i64>() == 0)
        {
            return true;
        }
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            lambda[i] += 1;
            if lambda[i] <= 3 {
                break;
            }
            lambda[i] = -3;
            i += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Seeded instance generator with engineered equal-distance coincidences
// ---------------------------------------------------------------------------

struct Instance {
    x: PointConfiguration,
    s: CentroidSet,
    tol: f64,
    raw_points: Vec<Vec<f64>>,
    raw_centroids: Vec<Vec<f64>>,
}

fn rotate_about(p: &[f64], c: &[f64], angle: f64) -> Vec<f64> {
    let (dx, dy) = (p[0] - c[0], p[1] - c[1]);
    let (sin, cos) = angle.sin_cos();
    vec![c[0] + dx * cos - dy * sin, c[1] + dx * sin + dy * cos]
}

fn reflect_across_line(p: &[f64], a: &[f64], b: &[f64]) -> Vec<f64> {
    let (ux, uy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = ux * ux + uy * uy;
    let (vx, vy) = (p[0] - a[0], p[1] - a[1]);
    let proj = (vx * ux + vy * uy) / len2;
    vec![
        a[0] + 2.0 * proj * ux - vx,
        a[1] + 2.0 * proj * uy - vy,
    ]
}

fn far_enough(pts: &[Vec<f64>], candidate: &[f64], min_gap: f64) -> bool {
    pts.iter().all(|p| euclid(p, candidate) > min_gap)
}

/// Random 2D instance: `n` points, `k` centroids. Besides uniform draws, new
/// points may be rotations of existing points about a centroid (sharing that
/// centroid's distance) or reflections across the line through the first two
/// centroids (sharing both), which engineers the equal-distance coincidences
/// that make cycles possible.
fn random_instance(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Instance {
    let min_gap = 1e-3;
    'outer: loop {
        let mut centroids: Vec<Vec<f64>> = Vec::new();
        while centroids.len() < k {
            let c = vec![rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
            if far_enough(&centroids, &c, 0.5) {
                centroids.push(c);
            }
        }
        let mut points: Vec<Vec<f64>> = Vec::new();
        let mut attempts = 0;
        while points.len() < n {
            attempts += 1;
            if attempts > 200 {
                continue 'outer;
            }
            let style = rng.gen_range(0..10);
            let candidate = if style < 4 || points.is_empty() {
                vec![rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]
            } else if style < 8 {
                let p = points[rng.gen_range(0..points.len())].clone();
                let c = &centroids[rng.gen_range(0..k)];
                rotate_about(&p, c, rng.gen_range(0.05..6.2))
            } else if k >= 2 {
                let p = points[rng.gen_range(0..points.len())].clone();
                reflect_across_line(&p, &centroids[0], &centroids[1])
            } else {
                vec![rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]
            };
            if far_enough(&points, &candidate, min_gap)
                && candidate.iter().all(|v| v.abs() < 50.0)
            {
                points.push(candidate);
            }
        }
        let Ok(x) = PointConfiguration::new(points.iter().map(|p| pt(p)).collect()) else {
            continue;
        };
        let Ok(s) = CentroidSet::new(centroids.iter().map(|c| pt(c)).collect()) else {
            continue;
        };
        let tol = default_grouping_tolerance(&x, &s).unwrap();
        return Instance {
            x,
            s,
            tol,
            raw_points: points,
            raw_centroids: centroids,
        };
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[test]
fn detection_agrees_with_brute_force_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c01e5);
    let mut cycles = 0usize;
    for trial in 0..150 {
        let n = rng.gen_range(1..=6);
        let k = rng.gen_range(1..=3);
        let inst = random_instance(&mut rng, n, k);
        let detected = detect_cycle(&inst.x, &inst.s, inst.tol).unwrap();
        let oracle = oracle_has_cycle(&inst.raw_points, &inst.raw_centroids, inst.tol);
        assert_eq!(
            detected.is_some(),
            oracle,
            "trial {trial}: detect={} oracle={oracle} pts={:?} cents={:?}",
            detected.is_some(),
            inst.raw_points,
            inst.raw_centroids
        );
        if let Some(w) = detected {
            cycles += 1;
            assert!(verify_witness(&inst.x, &inst.s, w.lambda(), inst.tol).unwrap());
        }
    }
    assert!(cycles > 10, "generator produced too few cycles: {cycles}");
}

#[test]
fn closed_paths_match_cycle_decisions_for_two_centroids() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc105ed);
    let mut paths = 0usize;
    for trial in 0..120 {
        let n = rng.gen_range(2..=7);
        let inst = random_instance(&mut rng, n, 2);
        let witness = detect_cycle(&inst.x, &inst.s, inst.tol).unwrap();
        let path = find_closed_path(&inst.x, &inst.s, inst.tol).unwrap();
        assert_eq!(
            witness.is_some(),
            path.is_some(),
            "trial {trial}: cycle={} path={} pts={:?}",
            witness.is_some(),
            path.is_some(),
            inst.raw_points
        );
        if let Some(p) = path {
            paths += 1;
            let w = path_witness(&p, inst.x.len()).unwrap();
            assert!(verify_witness(&inst.x, &inst.s, w.lambda(), inst.tol).unwrap());
        }
    }
    assert!(paths > 10, "generator produced too few closed paths: {paths}");
}

#[test]
fn tau_terminal_contains_every_verified_cycle_support() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a0);
    let mut checked = 0usize;
    for _ in 0..80 {
        let n = rng.gen_range(2..=7);
        let k = rng.gen_range(1..=3);
        let inst = random_instance(&mut rng, n, k);
        if let Some(w) = detect_cycle(&inst.x, &inst.s, inst.tol).unwrap() {
            let support = w.support();
            let trace = tau_fixpoint(&support, &inst.x, &inst.s, inst.tol).unwrap();
            for j in &support {
                assert!(
                    trace.terminal.contains(j),
                    "support point {j} dropped from tau terminal"
                );
            }
            // and the full-set trace keeps the support too
            let all: Vec<usize> = (0..inst.x.len()).collect();
            let full = tau_fixpoint(&all, &inst.x, &inst.s, inst.tol).unwrap();
            for j in &support {
                assert!(full.terminal.contains(j));
            }
            checked += 1;
        }
    }
    assert!(checked > 5, "too few cycles checked: {checked}");
}

#[test]
fn nullity_one_witnesses_permute_with_the_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e41);
    let mut checked = 0usize;
    for _ in 0..120 {
        let n = rng.gen_range(2..=6);
        let k = rng.gen_range(1..=3);
        let inst = random_instance(&mut rng, n, k);
        let Some(w) = detect_cycle(&inst.x, &inst.s, inst.tol).unwrap() else {
            continue;
        };
        // restrict to one-dimensional null spaces, where the canonical
        // witness is unique up to global sign
        let grouping =
            rbfnet::geometry::group_levels(&inst.x, &inst.s, inst.tol).unwrap();
        let matrix = rbfnet::geometry::incidence_matrix(&grouping);
        let rank = rbfnet::exact::row_echelon(&matrix.integer_rows()).rank();
        if rank + 1 != inst.x.len() {
            continue;
        }
        let mut perm: Vec<usize> = (0..inst.x.len()).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let permuted = PointConfiguration::new(
            perm.iter().map(|&j| inst.x.get(j).clone()).collect(),
        )
        .unwrap();
        let wp = detect_cycle(&permuted, &inst.s, inst.tol)
            .unwrap()
            .expect("permutation preserves cycles");
        // wp[pos] should equal +-w[perm[pos]] with one global sign
        let mut sign = 0i64;
        for (pos, &j) in perm.iter().enumerate() {
            let (a, b) = (wp.lambda()[pos], w.lambda()[j]);
            assert_eq!(a.abs(), b.abs(), "mismatched magnitudes under permutation");
            if a != 0 {
                let s = if a == b { 1 } else { -1 };
                if sign == 0 {
                    sign = s;
                } else {
                    assert_eq!(sign, s, "inconsistent sign pattern under permutation");
                }
            }
        }
        checked += 1;
    }
    assert!(checked > 5, "too few nullity-1 instances checked: {checked}");
}

#[test]
fn detected_cycles_annihilate_random_models_and_floor_the_fit() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd0a117);
    let mut checked = 0usize;
    for _ in 0..60 {
        if checked >= 12 {
            break;
        }
        let n = rng.gen_range(2..=6);
        let k = rng.gen_range(1..=3);
        let inst = random_instance(&mut rng, n, k);
        let Some(w) = detect_cycle(&inst.x, &inst.s, inst.tol).unwrap() else {
            continue;
        };
        checked += 1;
        let f = AnnihilatingFunctional::from_witness(&inst.x, &inst.s, &w, inst.tol).unwrap();

        // observed distance range drives the useful shift range
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in inst.x.points() {
            for c in inst.s.centroids() {
                let d = distance(p, c).unwrap();
                lo = lo.min(d);
                hi = hi.max(d);
            }
        }

        // random models over S annihilate
        for trial in 0..50 {
            let activation = builtin(BUILTIN_NAMES[trial % BUILTIN_NAMES.len()]).unwrap();
            let m = rng.gen_range(1..=20);
            let terms: Vec<RbfTerm> = (0..m)
                .map(|_| RbfTerm {
                    weight: rng.gen_range(-10.0..10.0),
                    centroid: inst.s.get(rng.gen_range(0..inst.s.len())).clone(),
                    shift: rng.gen_range(lo - 1.0..hi + 1.0),
                })
                .collect();
            let model = ShiftedRbfModel::new(terms, activation).unwrap();
            let check = check_annihilation(&f, &inst.x, &inst.s, &model, inst.tol).unwrap();
            assert!(
                check.passes(),
                "|F(H)| = {} exceeds tolerance {}",
                check.value,
                check.tolerance
            );
        }

        // the certified bound floors the best dictionary fit
        let targets = f.worst_case_target_embedded(inst.x.len());
        let bound = f.lower_bound(&f.worst_case_target()).unwrap();
        let grid = EvaluationGrid::with_targets(inst.x.points().to_vec(), targets).unwrap();
        let dict = build_dictionary(
            inst.s.centroids(),
            ShiftGrid::spanning(lo, hi, 128).unwrap(),
            builtin("gaussian").unwrap(),
        )
        .unwrap();
        let (_, report) = fit_least_squares(&dict, &grid, 0.0).unwrap();
        assert!(
            report.uniform_error >= bound - 1e-6,
            "fit error {} undercuts certified bound {bound}",
            report.uniform_error
        );
    }
    assert!(checked >= 8, "too few cycles exercised: {checked}");
}

#[test]
fn cycle_free_sets_interpolate_to_machine_accuracy() {
    // tau-empty configurations put no floor under the error: a fine enough
    // shift dictionary interpolates arbitrary data.
    let mut rng = ChaCha8Rng::seed_from_u64(0xf1e1d);
    let mut done = 0usize;
    while done < 5 {
        let n = rng.gen_range(4..=10);
        let k = rng.gen_range(1..=2);
        let inst = random_instance(&mut rng, n, k);
        let all: Vec<usize> = (0..inst.x.len()).collect();
        let trace = tau_fixpoint(&all, &inst.x, &inst.s, inst.tol).unwrap();
        if !trace.certifies_cycle_free() {
            continue;
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in inst.x.points() {
            for c in inst.s.centroids() {
                let d = distance(p, c).unwrap();
                lo = lo.min(d);
                hi = hi.max(d);
            }
        }
        let targets: Vec<f64> = (0..inst.x.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let grid = EvaluationGrid::with_targets(inst.x.points().to_vec(), targets).unwrap();
        let dict = build_dictionary(
            inst.s.centroids(),
            ShiftGrid::spanning(lo, hi, 512).unwrap(),
            builtin("gaussian").unwrap(),
        )
        .unwrap();
        let (_, report) = fit_least_squares(&dict, &grid, 0.0).unwrap();
        assert!(
            report.uniform_error < 1e-6,
            "interpolation error {} on a cycle-free set",
            report.uniform_error
        );
        done += 1;
    }
}
