//! `quantred`: validate, generate, compute, decompose, verify and certify.
//!
//! Exit codes: 0 success, 2 parse or validation failure, 3 failed identity,
//! 4 compute error.

mod args;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use run::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::run(&cli.command) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not worth a panic
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            eprint!("{}", outcome.stderr);
            if outcome.identity_failed {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Validation { diagnostics, .. } = &e {
                for d in diagnostics {
                    eprintln!("  {d}");
                }
            }
            ExitCode::from(e.exit_code())
        }
    }
}
