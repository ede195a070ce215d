//! Canned end-to-end experiments with fixed inputs and seeded randomness.
//! Given the same seed, every CSV they write is byte-identical run to run.

use crate::commands::{analyze_config, bound_config, fit_config, observed_distance_range};
use crate::error::CliError;
use crate::report::{num, write_csv, ExperimentReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rbfnet::activations::{builtin, BUILTIN_NAMES};
use rbfnet::cycles::detect_cycle;
use rbfnet::duality::{check_annihilation, AnnihilatingFunctional};
use rbfnet::geometry::{
    default_grouping_tolerance, group_levels, lattice, CentroidSet, Point, PointConfiguration,
};
use rbfnet::network::{
    ClassicRbfModel, ClassicRbfTerm, EvaluationGrid, RbfTerm, ShiftGrid, ShiftedRbfModel,
};
use std::path::Path;

pub const DEMO_NAMES: [&str; 5] = [
    "two-point-cycle",
    "four-point-cycle",
    "density-2d",
    "nondensity-duality",
    "classic-vs-shifted",
];

pub fn run_demo(name: &str, seed: u64, out: Option<&Path>) -> Result<ExperimentReport, CliError> {
    match name {
        "two-point-cycle" => two_point_cycle(out),
        "four-point-cycle" => four_point_cycle(out),
        "density-2d" => density_2d(out),
        "nondensity-duality" => nondensity_duality(seed, out),
        "classic-vs-shifted" => classic_vs_shifted(seed, out),
        _ => Err(CliError::input(format!(
            "unknown demo '{name}' (available: {})",
            DEMO_NAMES.join(", ")
        ))),
    }
}

fn pt(coords: &[f64]) -> Point {
    Point::new(coords.to_vec()).expect("demo coordinates are finite")
}

fn demo_centroids() -> CentroidSet {
    CentroidSet::new(vec![pt(&[0.0, 0.0]), pt(&[4.0, 0.0])]).expect("distinct centroids")
}

/// Upper intersection of the circles `|p| = r1` and `|p - (4,0)| = r2`.
fn circle_intersection(r1: f64, r2: f64) -> Point {
    let x = (r1 * r1 - r2 * r2 + 16.0) / 8.0;
    pt(&[x, (r1 * r1 - x * x).sqrt()])
}

/// Two mirrored points on the perpendicular bisector plane of the centroids.
pub fn two_point_configuration() -> PointConfiguration {
    PointConfiguration::new(vec![pt(&[2.0, 1.0]), pt(&[2.0, -1.0])]).expect("distinct points")
}

/// The four pairwise circle intersections, ordered so consecutive points
/// share a circle: (r1=2, r2=3), (2, 4), (3, 4), (3, 3).
pub fn four_point_configuration() -> PointConfiguration {
    PointConfiguration::new(vec![
        circle_intersection(2.0, 3.0),
        circle_intersection(2.0, 4.0),
        circle_intersection(3.0, 4.0),
        circle_intersection(3.0, 3.0),
    ])
    .expect("distinct points")
}

fn merge_into(report: &mut ExperimentReport, prefix: &str, sub: ExperimentReport) {
    for (k, v) in sub.results {
        report.results.push((format!("{prefix}.{k}"), v));
    }
    for (k, v) in sub.timings_ms {
        report.timings_ms.push((format!("{prefix}.{k}"), v));
    }
    report.csv_files.extend(sub.csv_files);
}

fn cycle_demo(
    kind: &str,
    x: PointConfiguration,
    out: Option<&Path>,
) -> Result<ExperimentReport, CliError> {
    let s = demo_centroids();
    let mut report = ExperimentReport::new(kind);
    report.input("n_points", x.len());
    report.input("centroids", "(0, 0) and (4, 0)");

    // Render the expanded linear system, one equation per level.
    let tol = default_grouping_tolerance(&x, &s)?;
    let grouping = group_levels(&x, &s, tol)?;
    let mut eq = 0;
    for i in 0..s.len() {
        for level in grouping.levels(i) {
            eq += 1;
            let terms: Vec<String> = level
                .members
                .iter()
                .map(|&j| format!("lambda{}", j + 1))
                .collect();
            report.result(
                format!("equation_{eq}"),
                format!("{} = 0 (centroid {}, distance {})", terms.join(" + "), i + 1, num(level.value)),
            );
        }
    }

    let analysis = analyze_config(&x, &s, None, out)?;
    merge_into(&mut report, "analyze", analysis);
    let bound = bound_config(&x, &s, None, "gaussian", None, true, None, out)?;
    merge_into(&mut report, "bound", bound);
    Ok(report)
}

fn two_point_cycle(out: Option<&Path>) -> Result<ExperimentReport, CliError> {
    cycle_demo("demo two-point-cycle", two_point_configuration(), out)
}

fn four_point_cycle(out: Option<&Path>) -> Result<ExperimentReport, CliError> {
    cycle_demo("demo four-point-cycle", four_point_configuration(), out)
}

/// `f(x, y) = sin(x) cos(y)` sampled on a 21x21 grid over [-1, 1]^2, fitted
/// with free centroids on a 5x5 lattice and 16 shifts.
fn density_2d(out: Option<&Path>) -> Result<ExperimentReport, CliError> {
    let mut samples = Vec::with_capacity(21 * 21);
    let mut targets = Vec::with_capacity(21 * 21);
    for i in 0..21 {
        for j in 0..21 {
            let x = -1.0 + i as f64 / 10.0;
            let y = -1.0 + j as f64 / 10.0;
            samples.push(pt(&[x, y]));
            targets.push(x.sin() * y.cos());
        }
    }
    let grid = EvaluationGrid::with_targets(samples, targets)?;
    let centroids = lattice(&[-1.0, -1.0], &[1.0, 1.0], &[5, 5])?;

    let mut report = ExperimentReport::new("demo density-2d");
    report.input("target", "sin(x) cos(y) on 21x21 over [-1,1]^2");
    report.input("centroid_lattice", "5x5 over [-1,1]^2");
    let (lo, hi) = observed_distance_range(grid.samples(), &centroids);
    let shifts = ShiftGrid::spanning(lo, hi, 16)?;
    let fit = fit_config(
        &grid,
        &centroids,
        "gaussian",
        Some(shifts),
        crate::commands::DEFAULT_RIDGE,
        None,
        None,
        out,
    )?;
    merge_into(&mut report, "fit", fit);
    Ok(report)
}

/// Worst-case target on the four-point cycle: certified bound vs the best a
/// 512-shift dictionary can do, plus seeded random models annihilating.
fn nondensity_duality(seed: u64, out: Option<&Path>) -> Result<ExperimentReport, CliError> {
    let x = four_point_configuration();
    let s = demo_centroids();
    let tol = default_grouping_tolerance(&x, &s)?;
    let mut report = ExperimentReport::new("demo nondensity-duality");
    report.input("configuration", "four-point cycle");
    report.input("seed", seed);

    let witness = detect_cycle(&x, &s, tol)?.expect("the demo configuration is a cycle");
    let functional = AnnihilatingFunctional::from_witness(&x, &s, &witness, tol)?;

    let bound = bound_config(
        &x,
        &s,
        None,
        "gaussian",
        Some(ShiftGrid::spanning(2.0, 4.0, 512)?),
        true,
        None,
        out,
    )?;
    merge_into(&mut report, "bound", bound);

    // Seeded random models over S: F annihilates every one of them.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = observed_distance_range(x.points(), s.centroids());
    let model_count = 200;
    let mut rows = Vec::with_capacity(model_count);
    let mut worst: f64 = 0.0;
    let mut all_pass = true;
    for trial in 0..model_count {
        let activation = builtin(BUILTIN_NAMES[trial % BUILTIN_NAMES.len()])?;
        let terms: Vec<RbfTerm> = (0..rng.gen_range(1..=30))
            .map(|_| RbfTerm {
                weight: rng.gen_range(-10.0..10.0),
                centroid: s.get(rng.gen_range(0..s.len())).clone(),
                shift: rng.gen_range(lo - 1.0..hi + 1.0),
            })
            .collect();
        let model = ShiftedRbfModel::new(terms, activation.clone())?;
        let check = check_annihilation(&functional, &x, &s, &model, tol)?;
        worst = worst.max(check.value);
        all_pass &= check.passes();
        rows.push(vec![
            trial.to_string(),
            activation.id().to_string(),
            model.terms().len().to_string(),
            num(check.value),
            num(check.tolerance),
            (if check.passes() { "yes" } else { "no" }).to_string(),
        ]);
    }
    report.result("annihilation_models", model_count);
    report.result("annihilation_worst_value", num(worst));
    report.result("annihilation_all_pass", if all_pass { "yes" } else { "no" });

    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        let path = dir.join("annihilation.csv");
        write_csv(
            &path,
            &["model", "activation", "terms", "value", "tolerance", "pass"],
            &rows,
        )?;
        report.csv_files.push(path);
    }
    Ok(report)
}

/// Classic (smoothing) form next to the shifted form: the sigma = 1 slice
/// coincides with the nu = 0 slice, and a shifted dictionary reproduces a
/// classic target on a sampled grid.
fn classic_vs_shifted(seed: u64, out: Option<&Path>) -> Result<ExperimentReport, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ExperimentReport::new("demo classic-vs-shifted");
    report.input("seed", seed);

    let centroids: Vec<Point> = (0..3)
        .map(|_| pt(&[rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]))
        .collect();
    let g = builtin("gaussian")?;
    let classic_terms: Vec<ClassicRbfTerm> = (0..5)
        .map(|_| ClassicRbfTerm {
            weight: rng.gen_range(-2.0..2.0),
            centroid: centroids[rng.gen_range(0..centroids.len())].clone(),
            smoothing: rng.gen_range(0.5..2.0),
        })
        .collect();
    let classic = ClassicRbfModel::new(classic_terms, g.clone())?;

    let mut samples = Vec::new();
    for i in 0..15 {
        for j in 0..15 {
            samples.push(pt(&[-3.0 + i as f64 * 6.0 / 14.0, -3.0 + j as f64 * 6.0 / 14.0]));
        }
    }
    let targets: Vec<f64> = samples
        .iter()
        .map(|x| classic.evaluate(x))
        .collect::<Result<_, _>>()?;
    let grid = EvaluationGrid::with_targets(samples.clone(), targets)?;
    report.input("target", "seeded 5-term classic RBF model on 15x15 over [-3,3]^2");

    // sigma = 1 in the classic form is exactly nu = 0 in the shifted form.
    let probe_classic = ClassicRbfModel::new(
        vec![ClassicRbfTerm {
            weight: 1.0,
            centroid: centroids[0].clone(),
            smoothing: 1.0,
        }],
        g.clone(),
    )?;
    let probe_shifted = ShiftedRbfModel::new(
        vec![RbfTerm {
            weight: 1.0,
            centroid: centroids[0].clone(),
            shift: 0.0,
        }],
        g.clone(),
    )?;
    let mut max_diff: f64 = 0.0;
    for x in &samples {
        max_diff =
            max_diff.max((probe_classic.evaluate(x)? - probe_shifted.evaluate(x)?).abs());
    }
    report.result("sigma1_vs_nu0_max_diff", num(max_diff));

    let fit = fit_config(
        &grid,
        &centroids,
        "gaussian",
        None,
        crate::commands::DEFAULT_RIDGE,
        None,
        None,
        out,
    )?;
    merge_into(&mut report, "fit", fit);

    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        let rows = vec![
            vec!["sigma1_vs_nu0_max_diff".to_string(), num(max_diff)],
            vec!["classic_terms".to_string(), classic.terms().len().to_string()],
        ];
        let path = dir.join("comparison.csv");
        write_csv(&path, &["key", "value"], &rows)?;
        report.csv_files.push(path);
    }
    Ok(report)
}
