use std::io::Write;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use mixed3::catalog;
use mixed3::verifier::{self, RunOutput, REPORT_VERSION};

mod dump;
mod render;
mod settings;

use settings::{Format, Overrides};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] mixed3::error::Error),
}

#[derive(Parser)]
#[command(name = "mixed3", version, about = "Verify metric mixed 3-structures and their submanifolds")]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Catalog of example immersions.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
    /// Run verification checks.
    #[command(group(ArgGroup::new("selection").required(true).args(["all", "check"])))]
    Verify {
        #[arg(long)]
        all: bool,
        /// Check id such as C05; repeatable.
        #[arg(long, value_name = "ID", num_args = 1..)]
        check: Vec<String>,
    },
    /// Print tensors at one point of a space (s7-pos, s11-neg, cosym, ...) or catalog example.
    Dump {
        id: String,
        /// Coordinates for a space (or eK for a unit vector), parameters for an example.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Option<Vec<String>>,
    },
}

#[derive(Subcommand)]
enum ExamplesAction {
    List,
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report values serialize");
    s.push('\n');
    s
}

fn execute(cli: Cli) -> Result<ExitCode, CliError> {
    let settings = cli.overrides.resolve()?;
    let cfg = settings.config;
    match cli.command {
        Command::Examples { action: ExamplesAction::List } => {
            let list = catalog::summaries()?;
            emit(&match settings.format {
                Format::Text => render::examples(&list),
                Format::Json => to_json(&list),
            });
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { all, check } => {
            let ids = if all { Vec::new() } else { check };
            let reports = verifier::run(&ids, &cfg)?;
            let failed = reports.iter().any(|r| r.failed());
            let output = RunOutput { version: REPORT_VERSION.to_string(), config: cfg, reports };
            emit(&match settings.format {
                Format::Text => render::reports(&output.reports),
                Format::Json => to_json(&output),
            });
            Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        Command::Dump { id, point } => {
            let value = dump::dump(&id, point.as_deref(), &cfg)?;
            emit(&match settings.format {
                Format::Text => render::tree(&value),
                Format::Json => to_json(&value),
            });
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
