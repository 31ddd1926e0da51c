use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = chainlet_cli::Cli::parse();
    let mut out = std::io::stdout().lock();
    match chainlet_cli::run(cli, &mut out) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(chainlet_cli::EXIT_ERROR)
        }
    }
}
