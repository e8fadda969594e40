use std::io::Write;
use std::process::ExitCode;

use buchi_core::cli::{run, RunConfig};
use clap::Parser;

fn main() -> ExitCode {
    let output = run(&RunConfig::parse());
    print!("{}", output.stdout);
    eprint!("{}", output.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(output.status as u8)
}
