//! `ake`: catalog browsing, iteration, curvature queries, ray sweeps and the
//! verification suite from the command line.
//!
//! Exit status: 0 on success, 1 on a numerical failure (the report is still
//! printed), 2 on a usage error (one-line diagnostic on stderr).

mod commands;
mod config;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RawArgs;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

#[derive(Parser)]
#[command(name = "ake", version, about = "Asymptotically Kaehler-Einstein metrics on polynomial domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the catalog domains and their parameters
    Domains,
    /// Print phi^(l), J and F at the given points
    Iterate(RawArgs),
    /// Print metric, curvature tensor, Bis, H and deviation at a point
    Curvature(RawArgs),
    /// Sample the iteration along the inward normal ray
    Sweep(RawArgs),
    /// Run the consolidated verification suite
    Verify(RawArgs),
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let out = match cli.command {
        Command::Domains => commands::domains(),
        Command::Iterate(a) => commands::iterate_cmd(&a.resolve()?)?,
        Command::Curvature(a) => commands::curvature_cmd(&a.resolve()?)?,
        Command::Verify(a) => commands::verify_cmd(&a.resolve()?)?,
        Command::Sweep(a) => {
            let cfg = a.resolve()?;
            let (out, csv) = commands::sweep_cmd(&cfg)?;
            if let (Some(path), Some(csv)) = (&cfg.out, csv) {
                fs::write(path, csv).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            }
            print!("{}", out.text);
            return Ok(out.ok);
        }
    };
    print!("{}", out.text);
    Ok(out.ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("{}", first.trim());
            return ExitCode::from(2);
        }
    };
    let code = match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(1)
        }
    };
    let _ = std::io::stdout().flush();
    code
}
