use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use gp2::cli::{execute, Cli};

fn main() -> ExitCode {
    let report = execute(&Cli::parse());
    print!("{}", report.stdout);
    eprint!("{}", report.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(report.code as u8)
}
