use std::process::ExitCode;

use chromobath_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("chromobath: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
