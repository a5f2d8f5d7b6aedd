use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use rfgrowth::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, err, code) = run(&cli);
    std::io::stdout().write_all(out.as_bytes()).ok();
    std::io::stderr().write_all(err.as_bytes()).ok();
    ExitCode::from(code as u8)
}
