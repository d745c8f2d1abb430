mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;
use netclt::parallel::Execution;

use args::{Cli, Command};
use error::{CliError, CliResult};

fn run(cli: &Cli) -> CliResult<()> {
    if cli.threads == Some(0) {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let exec = Execution::from_threads(cli.threads);
    let out = cli.out.as_deref();
    let bytes = match &cli.command {
        Command::Theory(a) => commands::theory(a, cli.format)?,
        Command::Simulate(a) => commands::simulate(a, cli.format, exec)?,
        Command::ReproduceTable(a) => commands::reproduce_table(a, cli.format, exec)?,
        Command::Percolate(a) => commands::percolate(a, cli.format, exec)?,
        Command::Verify(a) => {
            let (bytes, failures) = commands::verify(a, cli.format, exec)?;
            output::emit(out, &bytes)?;
            if failures.is_empty() {
                return Ok(());
            }
            for f in &failures {
                eprintln!("FAILED {f}");
            }
            return Err(CliError::Failure(format!("{} verification checks failed", failures.len())));
        }
    };
    output::emit(out, &bytes)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
