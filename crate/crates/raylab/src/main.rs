//! Command-line front end: one subcommand per experiment, JSON configs with
//! a strict schema, deterministic seeded runs, and JSON/CSV report files.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use raylab::lab::{emit, run, EmitFormat, ExperimentConfig, ExperimentKind};

/// Default output directory when neither --out nor RAYLAB_OUT is given.
const DEFAULT_OUT_DIR: &str = "raylab-out";

#[derive(Parser)]
#[command(
    name = "raylab",
    about = "Numerical laboratory for ray superposition, discrimination, steering, and search",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gauge invariance, formula equivalence, and the protocol success law.
    Superpose(CommonArgs),
    /// Linear-dependence to independence sweep with phase-condition stats.
    Ldli(CommonArgs),
    /// Unambiguous-discrimination POVM construction and feasibility sweep.
    Ud(CommonArgs),
    /// Steering gap, decode curve, and no-signaling restoration.
    Signal(CommonArgs),
    /// Standard-vs-super search traces with query accounting.
    Grover(CommonArgs),
    /// Bloch success-set scan and circle fit.
    Circle(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; must name the same experiment as the subcommand.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (falls back to RAYLAB_OUT, then ./raylab-out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, default_value = "json", value_parser = ["json", "csv"])]
    format: String,
    /// Tolerance override for checks that accept one.
    #[arg(long)]
    tolerance: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Superpose(a) => (ExperimentKind::Superpose, a),
        Command::Ldli(a) => (ExperimentKind::Ldli, a),
        Command::Ud(a) => (ExperimentKind::Ud, a),
        Command::Signal(a) => (ExperimentKind::Signal, a),
        Command::Grover(a) => (ExperimentKind::Grover, a),
        Command::Circle(a) => (ExperimentKind::Circle, a),
    };
    match execute(kind, args) {
        Ok(passed) => {
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn execute(kind: ExperimentKind, args: &CommonArgs) -> raylab::Result<bool> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let config = ExperimentConfig::from_json(&text)?;
            if config.experiment != kind {
                return Err(raylab::Error::Config(format!(
                    "config names experiment '{}' but the subcommand is '{}'",
                    config.experiment.name(),
                    kind.name()
                )));
            }
            config
        }
        None => ExperimentConfig::new(kind),
    };
    if let Some(seed) = args.seed {
        config.seed = Some(seed);
    }
    if let Some(tol) = args.tolerance {
        config.tolerance = Some(tol);
    }
    config.validate()?;

    let out_dir = args
        .out
        .clone()
        .or_else(|| std::env::var_os("RAYLAB_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    let format = EmitFormat::parse(&args.format)?;

    let started = Instant::now();
    let report = run(&config)?;
    let elapsed = started.elapsed();

    for line in report.summary_lines() {
        println!("{line}");
    }
    let paths = emit(&report, format, &out_dir)?;
    for path in &paths {
        println!("wrote {}", path.display());
    }
    // Timings go to stderr only: report files stay byte-identical per seed.
    eprintln!("{} finished in {:.3}s", report.experiment, elapsed.as_secs_f64());
    Ok(report.passed)
}
