use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use cubeterm::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = execute(&cli);
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(outcome.render(cli.pretty).as_bytes());
    ExitCode::from(outcome.code)
}
