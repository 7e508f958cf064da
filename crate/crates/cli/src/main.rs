use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod config;
mod design;
mod error;
mod games;
mod output;
mod qeval;
mod qgen;
mod uniqueness;

use error::{CliError, CliResult};

/// Simulation and cryptanalysis experiments for quantum PUFs.
#[derive(Debug, Parser)]
#[command(name = "qpuf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a QPUF descriptor.
    Qgen(qgen::QgenArgs),
    /// Evaluate a QPUF on a challenge and append the CRP.
    Qeval(qeval::QevalArgs),
    /// Diamond distances between independent instances.
    Uniqueness(uniqueness::UniquenessArgs),
    /// Design-quality diagnostics.
    #[command(subcommand)]
    Design(design::DesignCommand),
    /// Security games.
    #[command(subcommand)]
    Games(games::GamesCommand),
}

pub(crate) fn init_threads(threads: Option<usize>) -> CliResult<()> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Qgen(a) => qgen::run(a),
        Command::Qeval(a) => qeval::run(a),
        Command::Uniqueness(a) => uniqueness::run(a),
        Command::Design(c) => design::run(c),
        Command::Games(c) => games::run(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
