//! `ddwave` command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numerical failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{Figure, RunConfig};
use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "ddwave",
    version,
    about = "Deflection of doubly-dressed atoms by a cavity field"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dressed-state coefficients, Rabi frequency and ground-state decomposition.
    Dressed(RunArgs),
    /// Closed-form momentum distribution and peak table.
    Deflect(RunArgs),
    /// Split-operator propagation compared against the closed form.
    Oracle(RunArgs),
    /// Coupling-regime and adiabaticity report.
    Check(RunArgs),
    /// Deflection over the Cartesian product of the configured sweep axes.
    Sweep(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long, conflicts_with = "figure")]
    config: Option<PathBuf>,
    /// Built-in figure preset.
    #[arg(long, value_enum)]
    figure: Option<Figure>,
    /// Output directory (overrides `out` in the configuration).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    workers: Option<usize>,
}

fn load(args: &RunArgs) -> Result<RunConfig, CliError> {
    match (&args.config, args.figure) {
        (Some(path), None) => RunConfig::load(path),
        (None, Some(fig)) => Ok(fig.run_config()),
        _ => Err(CliError::validation(
            "give exactly one of --config or --figure",
        )),
    }
}

type Handler = fn(&RunConfig) -> Result<commands::Outputs, CliError>;

fn run(command: Command) -> Result<(), CliError> {
    let (args, f): (RunArgs, Handler) = match command {
        Command::Dressed(a) => (a, commands::dressed),
        Command::Deflect(a) => (a, commands::deflect_cmd),
        Command::Oracle(a) => (a, commands::oracle),
        Command::Check(a) => (a, commands::check),
        Command::Sweep(a) => (a, commands::sweep),
    };
    let cfg = load(&args)?;
    let out_dir = args
        .out
        .clone()
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("out"));

    let outputs = match args.workers {
        Some(0) => return Err(CliError::validation("--workers must be >= 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::validation(format!("cannot start {n} workers: {e}")))?
            .install(|| f(&cfg))?,
        None => f(&cfg)?,
    };
    for line in &outputs.summary {
        println!("{line}");
    }
    for path in outputs.write(&out_dir)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
