use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = rmf_cli::Cli::parse();
    let tol = std::env::var("RMF_TOL").ok();
    match rmf_cli::run(&cli, tol.as_deref()) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(rmf_cli::exit_code(&e) as u8)
        }
    }
}
