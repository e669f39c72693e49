use std::process::ExitCode;

use clap::Parser;
use mdshift::cli::{exit_code, init_threads, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| run(cli));
    match result {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
