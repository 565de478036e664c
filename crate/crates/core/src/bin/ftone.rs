use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand, ValueEnum};
use fundamental_tone::harness::{run_scenario_with_jobs, Kind, Scenario, JOBS_ENV};

#[derive(Debug, Parser)]
#[command(name = "ftone", version, about = "Bounds for the first p-Laplacian eigenvalue on model geometries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form lower bounds.
    Bound(RunArgs),
    /// Discrete upper bounds from Rayleigh-quotient minimization.
    Solve(RunArgs),
    /// Lower and upper bounds over the full p x R product.
    Sweep(RunArgs),
    /// Ball radius with a prescribed first eigenvalue.
    Invert(RunArgs),
    /// Lower and upper bounds; exits nonzero unless every row is sandwiched.
    Verify(RunArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Scenario file (TOML key-value format).
    #[arg(long)]
    config: PathBuf,

    /// Report destination (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "csv")]
    format: Format,

    /// Grid cells, overriding the scenario.
    #[arg(long)]
    grid: Option<usize>,

    /// Relative tolerance on the quotient, overriding the scenario.
    #[arg(long)]
    tol: Option<f64>,

    /// Worker threads for independent rows.
    #[arg(long, env = JOBS_ENV)]
    jobs: Option<usize>,
}

fn run(kind: Kind, args: RunArgs) -> anyhow::Result<bool> {
    let mut scenario = Scenario::from_file(&args.config, Some(kind))
        .with_context(|| format!("loading {}", args.config.display()))?;
    if let Some(m) = args.grid {
        scenario.grid_m = m;
    }
    if let Some(tol) = args.tol {
        scenario.opts.rel_tol = tol;
    }
    let jobs = args
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let report = run_scenario_with_jobs(&scenario, jobs)?;
    let text = match args.format {
        Format::Csv => report.to_csv()?,
        Format::Json => report.to_json()? + "\n",
    };
    match &args.out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(report.success())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::Bound(a) => (Kind::Bound, a),
        Command::Solve(a) => (Kind::Solve, a),
        Command::Sweep(a) => (Kind::Sweep, a),
        Command::Invert(a) => (Kind::Invert, a),
        Command::Verify(a) => (Kind::Verify, a),
    };
    match run(kind, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
