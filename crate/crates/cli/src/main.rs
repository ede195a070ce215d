use clap::{Args, Parser, Subcommand};
use rbfnet_cli::commands::{
    run_analyze, run_bound, run_classify, run_fit, AnalyzeOptions, BoundOptions, ClassifyOptions,
    FitOptions,
};
use rbfnet_cli::config::{parse_lattice_spec, parse_shift_spec, require_exists, FileConfig};
use rbfnet_cli::demos::run_demo;
use rbfnet_cli::error::CliError;
use std::path::PathBuf;

/// Shifted RBF networks: fitting, cycle detection, and duality bounds.
#[derive(Parser)]
#[command(name = "rbfnet", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct Common {
    /// Optional TOML config file; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV artifacts.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Grouping tolerance override (default: 1e-9 * (1 + max distance)).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Detect cycles, iterate the tau operator, and (for two centroids)
    /// report closed paths and orbits.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Point file: one point per line, whitespace-separated coordinates.
        #[arg(long)]
        points: Option<PathBuf>,
        /// Centroid file, same format as the point file.
        #[arg(long)]
        centroids: Option<PathBuf>,
    },
    /// Fit a shifted RBF model to a sampled grid by dictionary least squares.
    Fit {
        #[command(flatten)]
        common: Common,
        /// Grid file: coordinates plus a trailing target column.
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Fixed centroid file.
        #[arg(long)]
        centroids: Option<PathBuf>,
        /// Free-centroid lattice, one MIN:MAX:COUNT group per axis.
        #[arg(long, value_name = "SPEC")]
        lattice: Option<String>,
        /// Activation name (gaussian, logistic, sech, triangular-bump,
        /// inverse-quadratic, constant-one).
        #[arg(long)]
        activation: Option<String>,
        /// Shift grid MIN:MAX:COUNT (default: spans observed distances).
        #[arg(long, value_name = "MIN:MAX:COUNT")]
        shifts: Option<String>,
        /// Ridge regularization (default 1e-10).
        #[arg(long)]
        ridge: Option<f64>,
        /// Also run a greedy fit capped at this many terms.
        #[arg(long)]
        max_terms: Option<usize>,
        /// Greedy stopping tolerance on the uniform error.
        #[arg(long)]
        fit_tol: Option<f64>,
    },
    /// Compute the certified duality lower bound for a point set.
    Bound {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long)]
        centroids: Option<PathBuf>,
        /// Optional target values, one per point (default: the worst-case
        /// sign target of the detected cycle).
        #[arg(long)]
        targets: Option<PathBuf>,
        #[arg(long)]
        activation: Option<String>,
        #[arg(long, value_name = "MIN:MAX:COUNT")]
        shifts: Option<String>,
        /// Also fit a dictionary over the centroids and report the achieved
        /// uniform error next to the bound.
        #[arg(long)]
        compare_fit: bool,
    },
    /// Probe an activation against the density-theorem hypotheses.
    ClassifyActivation {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        activation: Option<String>,
        /// Ambient dimension d for the radial integral.
        #[arg(long)]
        dim: Option<usize>,
        /// Exponent p for the L^p probe.
        #[arg(long)]
        p: Option<f64>,
    },
    /// Run a canned experiment (two-point-cycle, four-point-cycle,
    /// density-2d, nondensity-duality, classic-vs-shifted).
    Demo {
        name: String,
        #[command(flatten)]
        common: Common,
        /// Random seed for the seeded demos.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn load_config(common: &Common, kind: &str) -> Result<FileConfig, CliError> {
    match &common.config {
        Some(path) => {
            require_exists(path)?;
            let config = FileConfig::load(path)?;
            config.check_kind(kind)?;
            Ok(config)
        }
        None => Ok(FileConfig::default()),
    }
}

fn required_path(
    flag: Option<PathBuf>,
    file: Option<PathBuf>,
    name: &str,
) -> Result<PathBuf, CliError> {
    let path = flag
        .or(file)
        .ok_or_else(|| CliError::input(format!("missing required --{name} FILE")))?;
    require_exists(&path)?;
    Ok(path)
}

fn run(cli: Cli) -> Result<rbfnet_cli::ExperimentReport, CliError> {
    match cli.command {
        Command::Analyze {
            common,
            points,
            centroids,
        } => {
            let file = load_config(&common, "analyze")?;
            run_analyze(&AnalyzeOptions {
                points: required_path(points, file.points, "points")?,
                centroids: required_path(centroids, file.centroids, "centroids")?,
                tol: common.tol.or(file.tol),
                out: common.out.or(file.out),
            })
        }
        Command::Fit {
            common,
            grid,
            centroids,
            lattice,
            activation,
            shifts,
            ridge,
            max_terms,
            fit_tol,
        } => {
            let file = load_config(&common, "fit")?;
            let centroids = match centroids.or(file.centroids) {
                Some(p) => {
                    require_exists(&p)?;
                    Some(p)
                }
                None => None,
            };
            let lattice = match lattice.or(file.lattice) {
                Some(spec) => Some(parse_lattice_spec(&spec)?),
                None => None,
            };
            let shifts = match shifts.or(file.shifts) {
                Some(spec) => Some(parse_shift_spec(&spec)?),
                None => None,
            };
            run_fit(&FitOptions {
                grid: required_path(grid, file.grid, "grid")?,
                centroids,
                lattice,
                activation: activation
                    .or(file.activation)
                    .unwrap_or_else(|| "gaussian".to_string()),
                shifts,
                ridge: ridge.or(file.ridge),
                max_terms: max_terms.or(file.max_terms),
                fit_tol: fit_tol.or(file.fit_tol),
                out: common.out.or(file.out),
            })
        }
        Command::Bound {
            common,
            points,
            centroids,
            targets,
            activation,
            shifts,
            compare_fit,
        } => {
            let file = load_config(&common, "bound")?;
            let targets = match targets.or(file.targets) {
                Some(p) => {
                    require_exists(&p)?;
                    Some(p)
                }
                None => None,
            };
            let shifts = match shifts.or(file.shifts) {
                Some(spec) => Some(parse_shift_spec(&spec)?),
                None => None,
            };
            run_bound(&BoundOptions {
                points: required_path(points, file.points, "points")?,
                centroids: required_path(centroids, file.centroids, "centroids")?,
                targets,
                activation: activation
                    .or(file.activation)
                    .unwrap_or_else(|| "gaussian".to_string()),
                shifts,
                compare_fit: compare_fit || file.compare_fit.unwrap_or(false),
                tol: common.tol.or(file.tol),
                out: common.out.or(file.out),
            })
        }
        Command::ClassifyActivation {
            common,
            activation,
            dim,
            p,
        } => {
            let file = load_config(&common, "classify-activation")?;
            run_classify(&ClassifyOptions {
                activation: activation
                    .or(file.activation)
                    .ok_or_else(|| CliError::input("missing required --activation NAME"))?,
                dim: dim.or(file.dim).unwrap_or(2),
                p: p.or(file.p).unwrap_or(1.0),
                out: common.out.or(file.out),
            })
        }
        Command::Demo { name, common, seed } => {
            let file = load_config(&common, "demo")?;
            run_demo(
                &name,
                seed.or(file.seed).unwrap_or(42),
                common.out.or(file.out).as_deref(),
            )
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            use std::io::Write;
            // tolerate a closed pipe (e.g. piping into `head`)
            let _ = write!(std::io::stdout(), "{report}");
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
