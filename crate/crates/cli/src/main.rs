use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use quasigrid_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let result = run(cli, &mut lock);
    let _ = lock.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("quasigrid: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
