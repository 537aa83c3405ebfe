use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = cff::cli::Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cff::cli::execute(cli, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
