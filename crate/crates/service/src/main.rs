use std::io::{self, BufReader};
use std::process::ExitCode;

use clap::Parser;
use vdgame_service::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut input = BufReader::new(io::stdin());
    let mut out = io::stdout();
    match run(cli, &mut input, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
