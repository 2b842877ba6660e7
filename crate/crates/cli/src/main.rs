//! `vacua` — batch experiment driver.
//!
//! Subcommands map one-to-one onto the library's experiment surfaces:
//! `project` (radial-projection equidistribution), `count-rigid`
//! (exact orbit counts, vacua streams, hyperbolic histograms),
//! `density` (Monte-Carlo critical-point/index densities), `geometry`
//! (Lambda/curvature dumps), and `census` (exact rigid count against
//! the density-times-volume prediction).
//!
//! Every run echoes its fully resolved configuration into the output;
//! seeds default to a fixed constant so the default invocation is
//! reproducible. Exit codes: 0 success, 2 usage/input errors, 1
//! calibration or internal failures.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod formats;
mod output;

use commands::{census, count_rigid, density, geometry, project};

/// Usage-level failure: bad arguments or unreadable/invalid inputs.
/// Mapped to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser)]
#[command(name = "vacua", version, about = "Flux-vacuum counting experiments")]
struct Cli {
    /// Worker threads for slab-parallel sections (the VACUA_THREADS
    /// environment variable overrides this; results do not depend on it)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Radial-projection equidistribution experiment (CSV + JSON summary)
    Project(project::Args),
    /// Exact rigid-model orbit count, vacua CSV, hyperbolic histogram
    CountRigid(count_rigid::Args),
    /// Monte-Carlo critical-point/index density from a Yukawa file
    Density(density::Args),
    /// Dump Lambda, curvature, and the Hodge-identity residual
    Geometry(geometry::Args),
    /// Full rigid pipeline: exact count vs density * volume prediction
    Census(census::Args),
}

fn configure_threads(cli_threads: Option<usize>) -> anyhow::Result<()> {
    let from_env = std::env::var("VACUA_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok());
    if let Some(n) = from_env.or(cli_threads) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()?;
    }
    Ok(())
}

fn run() -> anyhow::Result<()> {
    let cli = Cli::parse();
    configure_threads(cli.threads)?;
    match cli.command {
        Command::Project(args) => project::run(args),
        Command::CountRigid(args) => count_rigid::run(args),
        Command::Density(args) => density::run(args),
        Command::Geometry(args) => geometry::run(args),
        Command::Census(args) => census::run(args),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
