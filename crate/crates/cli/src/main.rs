mod args;
mod commands;
mod resources;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

/// Exit classes: 1 usage, 2 resource, 3 pipeline. Messages go to standard
/// error; standard output carries only the artifact.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Resource(String),
    Pipeline(String),
}

impl CliError {
    fn resource(e: wgss_core::Error) -> Self {
        CliError::Resource(e.to_string())
    }

    fn pipeline(e: wgss_core::Error) -> Self {
        CliError::Pipeline(e.to_string())
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Resource(_) => 2,
            CliError::Pipeline(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Resource(m) | CliError::Pipeline(m) => m,
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Summarize(args) => commands::summarize(args),
        Command::Evaluate(args) => commands::evaluate(args),
        Command::BuildIdf(args) => commands::build_idf(args),
        Command::EmbedCache(args) => commands::embed_cache(args),
        Command::SweepSigma(args) => commands::sweep_sigma(args),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(&cli) {
        eprintln!("wgss: {}", e.message());
        std::process::exit(e.exit_code());
    }
}
