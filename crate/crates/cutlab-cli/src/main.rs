//! `cutlab` command-line front end: every library operation behind a
//! subcommand, with explicit seeds, file I/O and deterministic output.

mod cli;
mod exec;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let parsed = cli::Cli::parse();
    match exec::run(parsed) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// Usage and input problems exit 2, desk-scale cap violations exit 3,
/// internal invariant breaches exit 1.
fn exit_code(err: &cutlab::Error) -> u8 {
    match err {
        cutlab::Error::TooLarge(_) => 3,
        cutlab::Error::Contract(_) => 1,
        cutlab::Error::Parameter(_)
        | cutlab::Error::Format(_)
        | cutlab::Error::UnsupportedPattern(_)
        | cutlab::Error::Io(_) => 2,
    }
}
