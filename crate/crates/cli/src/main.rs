use std::process::ExitCode;

use clap::Parser;

mod commands;
mod plot;

use commands::{Cli, CliError};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("NSGF_LOG", "warn")).init();
    let cli = Cli::parse();
    match commands::run(cli.command, &cli.run) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.code)
        }
    }
}

impl CliError {
    fn to_json(&self) -> String {
        serde_json::json!({
            "error": self.kind,
            "message": self.message,
            "exit_code": self.code,
        })
        .to_string()
    }
}
