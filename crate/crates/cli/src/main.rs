use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use tso_cli::{exit_code, run, Cli};

fn threads() -> Result<usize, String> {
    match std::env::var("TSO_THREADS") {
        Err(_) => Ok(0),
        Ok(v) if v.trim().is_empty() => Ok(0),
        Ok(v) => v.trim().parse().map_err(|_| format!("TSO_THREADS must be a non-negative integer, got {v:?}")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = match threads() {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    match run(&cli, threads) {
        Ok(out) => {
            print!("{}", out.stdout);
            eprint!("{}", out.stderr);
            let _ = std::io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}
