use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = mceprune_cli::args::Cli::parse();
    match mceprune_cli::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
