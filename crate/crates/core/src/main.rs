use std::process::ExitCode;

use clap::Parser;
use kronecker::cli::{dispatch, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = dispatch(&cli);
    if !outcome.output.is_empty() {
        println!("{}", outcome.output);
    }
    if let Some(err) = &outcome.error {
        eprintln!("error: {err}");
    }
    ExitCode::from(outcome.exit_code)
}
