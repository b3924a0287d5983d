use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use tpe::cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match tpe::run_cli(&cli) {
        Ok((text, code)) => match writeln!(std::io::stdout().lock(), "{text}") {
            Ok(()) => ExitCode::from(code),
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::from(code),
            Err(e) => {
                eprintln!("error: cannot write output: {e}");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
