use std::process::ExitCode;

use clap::Parser;

use gainscat::cli::{run, Cli};
use gainscat::Error;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Config(_) | Error::Domain(_) => ExitCode::from(2),
                Error::Numerical(_) => ExitCode::from(3),
            }
        }
    }
}
