//! Command-line front end for the biexciton-cascade simulator.
//!
//! Every subcommand reads one TOML config, writes its artifacts into
//! `--out`, and prints a one-line summary. Exit codes: 0 success,
//! 1 runtime (physics or I/O) failure, 2 config or usage error.

mod commands;
mod config;
mod error;
mod output;
mod parallel;

use clap::{Args, Parser, Subcommand};
use commands::Ctx;
use config::RunConfig;
use error::AppError;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "biexciton",
    version,
    about = "Polariton-cascade entanglement simulator",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration.
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
    /// Output directory for CSV/JSON artifacts (overrides `[output] dir`
    /// from the config; default `.`).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads for grid sweeps (default: all cores).
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
    /// Relative quadrature tolerance override.
    #[arg(long, value_name = "TOL")]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Emission spectrum and analytic line table.
    Spectrum(RunArgs),
    /// Sweep the entanglement degree over one or two parameters.
    Map(RunArgs),
    /// Maximize the entanglement degree over the cavity detunings.
    Optimize(RunArgs),
    /// Scan the spectral window width.
    FilterSweep(RunArgs),
    /// Two-excitation eigenstructure and transition asymmetry.
    Bipolariton(RunArgs),
}

impl Command {
    fn args(&self) -> &RunArgs {
        match self {
            Command::Spectrum(a)
            | Command::Map(a)
            | Command::Optimize(a)
            | Command::FilterSweep(a)
            | Command::Bipolariton(a) => a,
        }
    }
}

fn run(cli: &Cli) -> Result<(), AppError> {
    let args = cli.command.args();
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(AppError::config("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| AppError::config(format!("thread pool: {e}")))?;
    }
    if let Some(t) = args.tol {
        if !(t > 0.0) || !t.is_finite() {
            return Err(AppError::config("--tol must be finite and positive"));
        }
    }
    let text = std::fs::read_to_string(&args.config).map_err(|e| {
        AppError::config(format!("reading {}: {e}", args.config.display()))
    })?;
    let cfg = RunConfig::from_toml(&text)?;
    let out_dir = match &args.out {
        Some(p) => p.clone(),
        None => PathBuf::from(cfg.output.dir.as_deref().unwrap_or(".")),
    };
    let ctx = Ctx {
        out_dir,
        tol_override: args.tol,
    };
    match &cli.command {
        Command::Spectrum(_) => commands::cmd_spectrum(&cfg, &ctx),
        Command::Map(_) => commands::cmd_map(&cfg, &ctx),
        Command::Optimize(_) => commands::cmd_optimize(&cfg, &ctx),
        Command::FilterSweep(_) => commands::cmd_filter_sweep(&cfg, &ctx),
        Command::Bipolariton(_) => commands::cmd_bipolariton(&cfg, &ctx),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        e.report();
        std::process::exit(e.exit_code());
    }
}
