//! Command-line front end for the Laplace Cauchy-problem solver.
//!
//! Subcommands take a flat key-value config file describing one experiment;
//! flags override individual fields. Results land in the output directory
//! as CSV tables plus a `summary.json` embedding the effective config, so
//! any run can be reproduced from its own summary.

// `!(x >= 0.0)` guards treat NaN as invalid input on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable, unparsable or invalid configuration (exit 2).
    Config(String),
    /// A solver stage failed (exit 3).
    Compute(String),
    /// Report files could not be written (exit 4).
    Io(String),
}

impl From<cauchy_mfs::Error> for CliError {
    fn from(e: cauchy_mfs::Error) -> Self {
        match e {
            cauchy_mfs::Error::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Compute(_) => "compute",
            CliError::Io(_) => "io",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Compute(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Compute(m) | CliError::Io(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "cauchy-mfs",
    about = "Solve the 2-D Laplace Cauchy problem by the method of fundamental solutions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One end-to-end solve with L-curve parameter selection.
    Solve(RunArgs),
    /// Error and optimal parameter against a list of noise levels.
    SweepNoise(RunArgs),
    /// Error over a grid of source counts/radii, or over collocation counts.
    ScanParams(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment configuration file (TOML, or JSON from a summary echo).
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `out_dir` from the file).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Noise seed (overrides `seed`).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for per-cell parallelism.
    #[arg(long)]
    jobs: Option<usize>,
    /// Fixed regularization parameter instead of the L-curve corner
    /// (0 disables regularization).
    #[arg(long)]
    alpha: Option<f64>,
    /// Also dump the assembled matrix and right-hand side as CSV.
    #[arg(long)]
    dump_matrix: bool,
}

impl RunArgs {
    /// Loads the config and applies the flag overrides.
    fn effective_config(&self) -> Result<RunConfig, CliError> {
        let mut config = RunConfig::load(&self.config)?;
        if let Some(out) = &self.out {
            config.out_dir = Some(out.display().to_string());
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(alpha) = self.alpha {
            config.alpha = Some(alpha);
        }
        if self.dump_matrix {
            config.dump_matrix = true;
        }
        if let Some(jobs) = self.jobs {
            // ignore the error when a pool already exists (e.g. in tests)
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build_global();
        }
        Ok(config)
    }
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Solve(args) => commands::cmd_solve(&args.effective_config()?),
        Command::SweepNoise(args) => commands::cmd_sweep_noise(&args.effective_config()?),
        Command::ScanParams(args) => commands::cmd_scan_params(&args.effective_config()?),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!(
                "{}",
                json!({"kind": e.kind(), "message": e.message()})
            );
            ExitCode::from(e.exit_code())
        }
    }
}
