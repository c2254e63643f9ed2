use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use qgame_cli::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match qgame_cli::run(&cli, &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qgame: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
