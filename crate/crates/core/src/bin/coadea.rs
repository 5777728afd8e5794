use std::process::ExitCode;

use clap::Parser;
use coadea::cli::{parse_config, run_experiment, Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run(args) = cli.command;
    let cfg = match parse_config(&args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("coadea: {e}");
            return ExitCode::from(2);
        }
    };
    let stdout = std::io::stdout();
    match run_experiment(&cfg, &mut stdout.lock()) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("coadea: {e}");
            ExitCode::FAILURE
        }
    }
}
