use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use covdepth::args::Cli;
use covdepth::error::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = covdepth::run(&cli);
    let mut stdout = std::io::stdout().lock();
    match result {
        Ok(out) => {
            if stdout.write_all(out.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            if let CliError::Acceptance { report, .. } = &err {
                let _ = stdout.write_all(report.as_bytes());
            }
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
