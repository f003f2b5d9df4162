use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use quasiblow::cli;

/// Simulation and diagnostics for the parameterized quasilinear wave
/// equation u_tt = c(u)^2 u_xx + lambda c(u) c'(u) (u_x)^2.
#[derive(Parser)]
#[command(name = "quasiblow", version, about)]
struct Args {
    #[command(subcommand)]
    kind: Kind,
}

#[derive(clap::Args)]
struct Common {
    /// JSON scenario configuration
    #[arg(long)]
    config: PathBuf,
    /// Output directory for run.json, CSV tables, and plots
    #[arg(long)]
    out: Option<PathBuf>,
    /// Concurrent sweep workers
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Seed for the randomized property suites
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Kind {
    /// Run one PDE scenario
    Simulate(Common),
    /// Run a Cartesian sweep over eps/lambda/grid axes
    Sweep(Common),
    /// Evaluate the closed-form Riccati comparison system
    Riccati(Common),
    /// Run the generalized Carlemann model
    Carlemann(Common),
    /// Run the lambda = 2 power-model scenario with invariant diagnostics
    Psystem(Common),
    /// Run the randomized verification suites
    Verify(Common),
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (kind, common) = match &args.kind {
        Kind::Simulate(c) => ("simulate", c),
        Kind::Sweep(c) => ("sweep", c),
        Kind::Riccati(c) => ("riccati", c),
        Kind::Carlemann(c) => ("carlemann", c),
        Kind::Psystem(c) => ("psystem", c),
        Kind::Verify(c) => ("verify", c),
    };
    match cli::run_from_file(
        kind,
        &common.config,
        common.out.clone(),
        common.workers,
        common.seed,
    ) {
        Ok(code) => {
            if code != 0 {
                eprintln!("quasiblow: scenario finished with failures (exit {code})");
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            let code = cli::error_exit_code(&e);
            eprintln!("quasiblow: {e}");
            ExitCode::from(code as u8)
        }
    }
}
