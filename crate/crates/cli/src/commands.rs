//! The experiment pipelines behind each subcommand. Each pipeline is split
//! into a file-loading wrapper and an in-memory core so the canned demos can
//! reuse the cores directly.

use crate::error::CliError;
use crate::report::{num, write_csv, ExperimentReport};
use rbfnet::activations::{builtin, classify, ProbeSettings};
use rbfnet::cycles::{
    detect_cycle, find_closed_path, orbits, path_witness, tau_fixpoint, CycleWitness,
    PathRelation,
};
use rbfnet::duality::AnnihilatingFunctional;
use rbfnet::geometry::{
    default_grouping_tolerance, distance, group_levels, CentroidSet, Point, PointConfiguration,
};
use rbfnet::io::{read_grid, read_points, read_values, write_model};
use rbfnet::network::{
    build_dictionary, fit_least_squares, greedy_fit, uniform_error, Dictionary, EvaluationGrid,
    ShiftGrid,
};
use std::path::{Path, PathBuf};
use std::time::Instant;

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn render_witness(w: &CycleWitness) -> String {
    let entries: Vec<String> = w.lambda().iter().map(|l| l.to_string()).collect();
    format!("({})", entries.join(", "))
}

fn render_indices(idx: &[usize]) -> String {
    let entries: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
    format!("[{}]", entries.join(", "))
}

/// Observed distance range between a sample set and the centroids; drives
/// default shift grids.
pub fn observed_distance_range(samples: &[Point], centroids: &[Point]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in samples {
        for c in centroids {
            let d = distance(p, c).expect("dimensions checked upstream");
            lo = lo.min(d);
            hi = hi.max(d);
        }
    }
    (lo, hi)
}

/// Default shift count when no explicit grid is given.
pub const DEFAULT_SHIFT_COUNT: usize = 64;
/// Default ridge regularization for fitting.
pub const DEFAULT_RIDGE: f64 = 1e-10;

/// Resolves an explicit or spanning shift grid for a sample/centroid pair.
pub fn resolve_shift_grid(
    explicit: Option<ShiftGrid>,
    samples: &[Point],
    centroids: &[Point],
    default_count: usize,
) -> Result<ShiftGrid, CliError> {
    match explicit {
        Some(g) => Ok(g),
        None => {
            let (lo, hi) = observed_distance_range(samples, centroids);
            Ok(ShiftGrid::spanning(lo, hi, default_count)?)
        }
    }
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

pub struct AnalyzeOptions {
    pub points: PathBuf,
    pub centroids: PathBuf,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
}

pub fn run_analyze(opts: &AnalyzeOptions) -> Result<ExperimentReport, CliError> {
    let points = read_points(&opts.points)?;
    let centroids = read_points(&opts.centroids)?;
    let x = PointConfiguration::new(points)?;
    let s = CentroidSet::new(centroids)?;
    let mut report = analyze_config(&x, &s, opts.tol, opts.out.as_deref())?;
    report
        .inputs
        .insert(0, ("points".into(), opts.points.display().to_string()));
    report
        .inputs
        .insert(1, ("centroids".into(), opts.centroids.display().to_string()));
    Ok(report)
}

/// Cycle/path/orbit analysis of an in-memory configuration.
pub fn analyze_config(
    x: &PointConfiguration,
    s: &CentroidSet,
    tol_override: Option<f64>,
    out: Option<&Path>,
) -> Result<ExperimentReport, CliError> {
    let tol = match tol_override {
        Some(t) => t,
        None => default_grouping_tolerance(x, s)?,
    };
    let mut report = ExperimentReport::new("analyze");
    report.input("n_points", x.len());
    report.input("n_centroids", s.len());
    report.input("dimension", x.dim());
    report.input("tolerance", num(tol));

    let grouping = group_levels(x, s, tol)?;
    for i in 0..s.len() {
        report.result(
            format!("levels_centroid_{i}"),
            grouping.levels_per_centroid(i),
        );
    }

    let t0 = Instant::now();
    let witness = detect_cycle(x, s, tol)?;
    report.timing("detect_cycle", ms(t0));
    match &witness {
        Some(w) => {
            report.result("cycle", "yes");
            report.result("witness", render_witness(w));
            report.result("witness_support", render_indices(&w.support()));
        }
        None => report.result("cycle", "no"),
    }

    let all: Vec<usize> = (0..x.len()).collect();
    let t0 = Instant::now();
    let trace = tau_fixpoint(&all, x, s, tol)?;
    report.timing("tau_fixpoint", ms(t0));
    report.result("tau_steps", trace.steps);
    report.result("tau_terminal", render_indices(&trace.terminal));
    report.result(
        "tau_certifies_cycle_free",
        if trace.certifies_cycle_free() { "yes" } else { "no" },
    );

    let mut path = None;
    let mut orbit_partition = None;
    if s.len() == 2 {
        let t0 = Instant::now();
        path = find_closed_path(x, s, tol)?;
        report.timing("find_closed_path", ms(t0));
        match &path {
            Some(p) => {
                report.result("closed_path", render_indices(&p.points));
                report.result(
                    "closed_path_start_relation",
                    match p.start_relation {
                        PathRelation::Centroid1 => "centroid 1",
                        PathRelation::Centroid2 => "centroid 2",
                    },
                );
                let w = path_witness(p, x.len())?;
                report.result("path_witness", render_witness(&w));
            }
            None => report.result("closed_path", "none"),
        }
        let o = orbits(x, s, tol)?;
        report.result("orbit_count", o.orbits.len());
        for (i, orbit) in o.orbits.iter().enumerate() {
            report.result(format!("orbit_{i}"), render_indices(orbit));
        }
        orbit_partition = Some(o);
    }

    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        let mut rows = Vec::new();
        for i in 0..s.len() {
            for (li, level) in grouping.levels(i).iter().enumerate() {
                for &m in &level.members {
                    rows.push(vec![
                        i.to_string(),
                        li.to_string(),
                        num(level.value),
                        m.to_string(),
                    ]);
                }
            }
        }
        let levels_path = dir.join("levels.csv");
        write_csv(&levels_path, &["centroid", "level", "value", "point"], &rows)?;
        report.csv_files.push(levels_path);

        if let Some(w) = &witness {
            let rows: Vec<Vec<String>> = w
                .lambda()
                .iter()
                .enumerate()
                .map(|(j, l)| vec![j.to_string(), l.to_string()])
                .collect();
            let path = dir.join("witness.csv");
            write_csv(&path, &["point", "lambda"], &rows)?;
            report.csv_files.push(path);
        }

        let mut rows = Vec::new();
        for (step, iterate) in trace.iterates.iter().enumerate() {
            for &j in iterate {
                rows.push(vec![step.to_string(), j.to_string()]);
            }
        }
        let tau_path = dir.join("tau_trace.csv");
        write_csv(&tau_path, &["step", "point"], &rows)?;
        report.csv_files.push(tau_path);

        if let Some(p) = &path {
            let rows: Vec<Vec<String>> = p
                .points
                .iter()
                .enumerate()
                .map(|(pos, &j)| vec![pos.to_string(), j.to_string()])
                .collect();
            let path_csv = dir.join("closed_path.csv");
            write_csv(&path_csv, &["position", "point"], &rows)?;
            report.csv_files.push(path_csv);
        }

        if let Some(o) = &orbit_partition {
            let mut rows = Vec::new();
            for (i, orbit) in o.orbits.iter().enumerate() {
                for &j in orbit {
                    rows.push(vec![i.to_string(), j.to_string()]);
                }
            }
            let orbit_path = dir.join("orbits.csv");
            write_csv(&orbit_path, &["orbit", "point"], &rows)?;
            report.csv_files.push(orbit_path);
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

pub struct FitOptions {
    pub grid: PathBuf,
    pub centroids: Option<PathBuf>,
    pub lattice: Option<(Vec<f64>, Vec<f64>, Vec<usize>)>,
    pub activation: String,
    pub shifts: Option<ShiftGrid>,
    pub ridge: Option<f64>,
    pub max_terms: Option<usize>,
    pub fit_tol: Option<f64>,
    pub out: Option<PathBuf>,
}

pub fn run_fit(opts: &FitOptions) -> Result<ExperimentReport, CliError> {
    let grid = read_grid(&opts.grid, true)?;
    let centroids: Vec<Point> = match (&opts.centroids, &opts.lattice) {
        (Some(path), None) => read_points(path)?,
        (None, Some((mins, maxs, counts))) => rbfnet::geometry::lattice(mins, maxs, counts)?,
        (Some(_), Some(_)) => {
            return Err(CliError::input(
                "give either --centroids or --lattice, not both",
            ))
        }
        (None, None) => {
            return Err(CliError::input(
                "fit needs --centroids FILE or --lattice SPEC",
            ))
        }
    };
    let mut report = fit_config(
        &grid,
        &centroids,
        &opts.activation,
        opts.shifts,
        opts.ridge.unwrap_or(DEFAULT_RIDGE),
        opts.max_terms,
        opts.fit_tol,
        opts.out.as_deref(),
    )?;
    report
        .inputs
        .insert(0, ("grid".into(), opts.grid.display().to_string()));
    Ok(report)
}

/// Dictionary least-squares fit (plus optional greedy pass) of an in-memory
/// grid.
#[allow(clippy::too_many_arguments)]
pub fn fit_config(
    grid: &EvaluationGrid,
    centroids: &[Point],
    activation: &str,
    shifts: Option<ShiftGrid>,
    ridge: f64,
    max_terms: Option<usize>,
    fit_tol: Option<f64>,
    out: Option<&Path>,
) -> Result<ExperimentReport, CliError> {
    let g = builtin(activation)?;
    let shift_grid = resolve_shift_grid(shifts, grid.samples(), centroids, DEFAULT_SHIFT_COUNT)?;
    let dict: Dictionary = build_dictionary(centroids, shift_grid, g)?;

    let mut report = ExperimentReport::new("fit");
    report.input("samples", grid.len());
    report.input("dimension", grid.dim());
    report.input("centroids", centroids.len());
    report.input("activation", activation);
    report.input(
        "shift_grid",
        format!(
            "[{}, {}] x {}",
            num(shift_grid.min),
            num(shift_grid.max),
            shift_grid.count
        ),
    );
    report.input("atoms", dict.len());
    report.input("ridge", num(ridge));

    let t0 = Instant::now();
    let (model, fit) = fit_least_squares(&dict, grid, ridge)?;
    report.timing("fit_least_squares", ms(t0));
    report.result("rms_error", num(fit.rms_error));
    report.result("uniform_error", num(fit.uniform_error));
    report.result("dropped_atoms", fit.dropped_atoms.len());
    let recomputed = uniform_error(&model, grid)?;
    report.result("uniform_error_recomputed", num(recomputed));

    let mut greedy = None;
    if let Some(m) = max_terms {
        let tol = fit_tol.unwrap_or(1e-6);
        let t0 = Instant::now();
        let (gmodel, greport) = greedy_fit(&dict, grid, m, tol)?;
        report.timing("greedy_fit", ms(t0));
        report.result("greedy_terms", greport.selected.len());
        report.result("greedy_uniform_error", num(greport.uniform_error));
        report.result(
            "greedy_tolerance_met",
            if greport.tolerance_met { "yes" } else { "no" },
        );
        greedy = Some((gmodel, greport));
    }

    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        let model_path = dir.join("model.txt");
        write_model(&model_path, &model)?;
        report.csv_files.push(model_path);

        let targets = grid.targets().expect("fit grid has targets");
        let mut rows = Vec::new();
        for (i, sample) in grid.samples().iter().enumerate() {
            let prediction = model.evaluate(sample)?;
            let mut row = vec![i.to_string()];
            row.extend(sample.coords().iter().map(|&c| num(c)));
            row.push(num(targets[i]));
            row.push(num(prediction));
            row.push(num(prediction - targets[i]));
            rows.push(row);
        }
        let mut header: Vec<String> = vec!["index".into()];
        header.extend((0..grid.dim()).map(|a| format!("x{a}")));
        header.extend(["target".into(), "prediction".into(), "residual".into()]);
        let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
        let residuals_path = dir.join("residuals.csv");
        write_csv(&residuals_path, &header_refs, &rows)?;
        report.csv_files.push(residuals_path);

        let mut summary = vec![
            vec!["rms_error".to_string(), num(fit.rms_error)],
            vec!["uniform_error".to_string(), num(fit.uniform_error)],
            vec!["atoms".to_string(), dict.len().to_string()],
            vec!["dropped_atoms".to_string(), fit.dropped_atoms.len().to_string()],
        ];
        if let Some((gmodel, greport)) = &greedy {
            summary.push(vec![
                "greedy_terms".to_string(),
                greport.selected.len().to_string(),
            ]);
            summary.push(vec![
                "greedy_uniform_error".to_string(),
                num(greport.uniform_error),
            ]);
            let greedy_path = dir.join("model_greedy.txt");
            write_model(&greedy_path, gmodel)?;
            report.csv_files.push(greedy_path);
        }
        let summary_path = dir.join("summary.csv");
        write_csv(&summary_path, &["key", "value"], &summary)?;
        report.csv_files.push(summary_path);
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// bound
// ---------------------------------------------------------------------------

pub struct BoundOptions {
    pub points: PathBuf,
    pub centroids: PathBuf,
    pub targets: Option<PathBuf>,
    pub activation: String,
    pub shifts: Option<ShiftGrid>,
    pub compare_fit: bool,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
}

pub fn run_bound(opts: &BoundOptions) -> Result<ExperimentReport, CliError> {
    let x = PointConfiguration::new(read_points(&opts.points)?)?;
    let s = CentroidSet::new(read_points(&opts.centroids)?)?;
    let targets = match &opts.targets {
        Some(path) => {
            let values = read_values(path)?;
            if values.len() != x.len() {
                return Err(CliError::input(format!(
                    "target count {} does not match point count {}",
                    values.len(),
                    x.len()
                )));
            }
            Some(values)
        }
        None => None,
    };
    let mut report = bound_config(
        &x,
        &s,
        targets.as_deref(),
        &opts.activation,
        opts.shifts,
        opts.compare_fit,
        opts.tol,
        opts.out.as_deref(),
    )?;
    report
        .inputs
        .insert(0, ("points".into(), opts.points.display().to_string()));
    report
        .inputs
        .insert(1, ("centroids".into(), opts.centroids.display().to_string()));
    Ok(report)
}

/// Duality lower bound for an in-memory configuration. With no target values
/// given, the worst-case sign target of the detected cycle is used.
#[allow(clippy::too_many_arguments)]
pub fn bound_config(
    x: &PointConfiguration,
    s: &CentroidSet,
    targets: Option<&[f64]>,
    activation: &str,
    shifts: Option<ShiftGrid>,
    compare_fit: bool,
    tol_override: Option<f64>,
    out: Option<&Path>,
) -> Result<ExperimentReport, CliError> {
    let tol = match tol_override {
        Some(t) => t,
        None => default_grouping_tolerance(x, s)?,
    };
    let mut report = ExperimentReport::new("bound");
    report.input("n_points", x.len());
    report.input("n_centroids", s.len());
    report.input("tolerance", num(tol));

    let t0 = Instant::now();
    let witness = detect_cycle(x, s, tol)?;
    report.timing("detect_cycle", ms(t0));

    let Some(witness) = witness else {
        report.result("cycle", "no");
        report.result(
            "note",
            "no cycle: radial sums over these centroids put no floor under the error",
        );
        if let Some(dir) = out {
            std::fs::create_dir_all(dir)?;
            let bound_path = dir.join("bound.csv");
            write_csv(
                &bound_path,
                &["key", "value"],
                &[vec!["cycle".to_string(), "no".to_string()]],
            )?;
            report.csv_files.push(bound_path);
        }
        return Ok(report);
    };

    report.result("cycle", "yes");
    report.result("witness", render_witness(&witness));
    let functional = AnnihilatingFunctional::from_witness(x, s, &witness, tol)?;
    report.result("functional_norm", functional.norm());

    let full_targets: Vec<f64> = match targets {
        Some(t) => t.to_vec(),
        None => functional.worst_case_target_embedded(x.len()),
    };
    let support_values: Vec<f64> = functional
        .support()
        .iter()
        .map(|&j| full_targets[j])
        .collect();
    let applied = functional.apply(&support_values)?;
    let bound = functional.lower_bound(&support_values)?;
    report.result("functional_value", num(applied));
    report.result("lower_bound", num(bound));

    let mut fitted = None;
    if compare_fit {
        let shift_grid = resolve_shift_grid(shifts, x.points(), s.centroids(), 512)?;
        let dict = build_dictionary(s.centroids(), shift_grid, builtin(activation)?)?;
        let grid = EvaluationGrid::with_targets(x.points().to_vec(), full_targets.clone())?;
        let t0 = Instant::now();
        let (_, fit) = fit_least_squares(&dict, &grid, 0.0)?;
        report.timing("fit_least_squares", ms(t0));
        report.result("fitted_uniform_error", num(fit.uniform_error));
        report.result("fitted_minus_bound", num(fit.uniform_error - bound));
        fitted = Some(fit.uniform_error);
    }

    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        let rows: Vec<Vec<String>> = witness
            .lambda()
            .iter()
            .enumerate()
            .map(|(j, l)| vec![j.to_string(), l.to_string()])
            .collect();
        let witness_path = dir.join("witness.csv");
        write_csv(&witness_path, &["point", "lambda"], &rows)?;
        report.csv_files.push(witness_path);

        let mut rows = vec![
            vec!["cycle".to_string(), "yes".to_string()],
            vec!["norm".to_string(), functional.norm().to_string()],
            vec!["functional_value".to_string(), num(applied)],
            vec!["lower_bound".to_string(), num(bound)],
        ];
        if let Some(err) = fitted {
            rows.push(vec!["fitted_uniform_error".to_string(), num(err)]);
        }
        let bound_path = dir.join("bound.csv");
        write_csv(&bound_path, &["key", "value"], &rows)?;
        report.csv_files.push(bound_path);
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// classify-activation
// ---------------------------------------------------------------------------

pub struct ClassifyOptions {
    pub activation: String,
    pub dim: usize,
    pub p: f64,
    pub out: Option<PathBuf>,
}

pub fn run_classify(opts: &ClassifyOptions) -> Result<ExperimentReport, CliError> {
    let g = builtin(&opts.activation)?;
    let mut report = ExperimentReport::new("classify-activation");
    report.input("activation", &opts.activation);
    report.input("dimension", opts.dim);
    report.input("p", num(opts.p));

    let t0 = Instant::now();
    let r = classify(&g, opts.dim, opts.p, &ProbeSettings::default())?;
    report.timing("classify", ms(t0));

    let limit = |probe: &rbfnet::activations::LimitProbe| match probe.value {
        Some(v) => num(v),
        None => "none".to_string(),
    };
    let status = |e: &rbfnet::activations::IntegralEstimate| match e.status {
        rbfnet::activations::IntegralStatus::Converged => format!("converged ({})", num(e.value)),
        rbfnet::activations::IntegralStatus::Diverging => {
            format!("diverging (reached {} by T={})", num(e.value), num(e.domain))
        }
        rbfnet::activations::IntegralStatus::Inconclusive => {
            format!("unknown (estimate {} at T={})", num(e.value), num(e.domain))
        }
    };
    report.result("bounded", r.bounded);
    report.result("bounded_estimate", num(r.bounded_estimate));
    report.result("monotone", r.monotone);
    report.result("nonconstant", r.nonconstant);
    report.result("limit_at_pos_inf", limit(&r.limit_at_pos_inf));
    report.result("limit_at_neg_inf", limit(&r.limit_at_neg_inf));
    report.result("lp_integral", status(&r.lp_integral));
    report.result("radial_integral", status(&r.radial_integral));
    report.result(
        "eligible_lp_radial",
        if r.eligible_lp_radial { "yes" } else { "no" },
    );
    report.result(
        "eligible_monotone_bounded",
        if r.eligible_monotone_bounded { "yes" } else { "no" },
    );
    report.result(
        "eligible_bounded_limit",
        if r.eligible_bounded_limit { "yes" } else { "no" },
    );

    if let Some(dir) = &opts.out {
        std::fs::create_dir_all(dir)?;
        let rows: Vec<Vec<String>> = report
            .results
            .iter()
            .map(|(k, v)| vec![k.clone(), v.clone()])
            .collect();
        let path = dir.join("classification.csv");
        write_csv(&path, &["key", "value"], &rows)?;
        report.csv_files.push(path);
    }
    Ok(report)
}
