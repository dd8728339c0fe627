mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use config::Usage;

const EXIT_ERROR: u8 = 1;
const EXIT_USAGE: u8 = 64;

fn configure_threads() -> Result<(), Usage> {
    let Ok(raw) = std::env::var("CARASOLVE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Usage(format!("CARASOLVE_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Usage(format!("cannot size the thread pool: {e}")))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<carasolve::Error>() {
        Some(carasolve::Error::Config(_)) => EXIT_USAGE,
        _ => EXIT_ERROR,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    let run = match &cli.command {
        Command::Solve(a) => commands::solve_cmd(a),
        Command::Approx(a) => commands::approx_cmd(a),
        Command::Verify(a) => commands::verify_cmd(a),
        Command::Demo(d) => commands::demo_cmd(d),
    };
    match run {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let code = exit_code(&e);
            eprintln!("error: {e:#}");
            if code == EXIT_USAGE {
                eprintln!("see `carasolve --help`");
            }
            ExitCode::from(code)
        }
    }
}
