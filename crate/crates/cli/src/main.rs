mod args;
mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

/// Environment variable capping the worker threads of parallel sweeps and grids.
const THREADS_ENV: &str = "ROBUST_ENSEMBLES_THREADS";

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot start {n} threads: {e}")))
}

fn output_path(cmd: &Command) -> Option<&std::path::Path> {
    let out = match cmd {
        Command::Evolve(a) => &a.out,
        Command::Survival(a) => &a.out,
        Command::Tau(a) => &a.out,
        Command::Optimize(a) => &a.out,
        Command::Sweep(a) => &a.out,
        Command::Contour(a) => &a.out,
        Command::Transition(a) => &a.out,
        Command::Report(a) => &a.out,
    };
    out.output.as_deref()
}

fn run() -> Result<(), CliError> {
    let raw = config::expand_args(std::env::args_os().collect())?;
    let cli = match Cli::try_parse_from(raw) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    init_threads()?;
    let artifact = commands::run(&cli.command)?;
    output::write_artifact(&artifact.text, output_path(&cli.command))
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
