use std::process::ExitCode;

fn main() -> ExitCode {
    cmlv::cli::run()
}
