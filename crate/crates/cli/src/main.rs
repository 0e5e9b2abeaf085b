use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use gramdet::{run, Cli, ExitStatus};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(ExitStatus::InputError.code() as u8),
            };
        }
    };
    let report = run(&cli);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(report.render(cli.format).as_bytes());
    let _ = stdout.flush();
    if report.status != ExitStatus::Ok {
        for e in &report.errors {
            eprintln!("error: {e}");
        }
    }
    ExitCode::from(report.status.code() as u8)
}
