use std::process::ExitCode;

use abstraction_lab_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("abslab: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &out.output),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(out.output.as_bytes())
        }
    };
    if let Err(e) = written {
        eprintln!("abslab: writing report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(out.status.exit_code())
}
