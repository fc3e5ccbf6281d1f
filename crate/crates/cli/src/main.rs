use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = fraccurv::Cli::parse();
    match fraccurv::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
