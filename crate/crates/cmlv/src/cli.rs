//! Command-line interface.

use std::process::ExitCode;

/// Entry point for the `cmlv` binary.
pub fn run() -> ExitCode {
    eprintln!("not yet wired");
    ExitCode::FAILURE
}
