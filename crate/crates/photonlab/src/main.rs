use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use photonlab::{parse_config, run_scenario, run_verify, RunError, ScenarioConfig, ScenarioKind, VerificationReport};

#[derive(Parser)]
#[command(name = "photonlab", version, about = "Single-photon wavepacket scenarios and invariant checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the invariant verification suite.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run the scenario described by a configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load(path: &Path) -> Result<ScenarioConfig, RunError> {
    let text = std::fs::read_to_string(path)?;
    let mut cfg = parse_config(&text)?;
    if cfg.output.is_relative() {
        if let Some(dir) = path.parent() {
            cfg.output = dir.join(&cfg.output);
        }
    }
    Ok(cfg)
}

fn execute(command: Command) -> Result<VerificationReport, RunError> {
    match command {
        Command::Verify { config } => {
            let cfg = match config {
                Some(p) => load(&p)?,
                None => ScenarioConfig::default_verify(),
            };
            if cfg.kind != ScenarioKind::Verify {
                return Err(photonlab::ConfigError::Semantic {
                    field: "scenario.kind".into(),
                    message: format!("verify needs kind = verify, found {}", cfg.kind.name()),
                }
                .into());
            }
            run_verify(&cfg)
        }
        Command::Run { config } => run_scenario(&load(&config)?),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(report) => {
            print!("{}", report.to_text());
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                for c in report.failures() {
                    eprintln!("check failed: {}", c.name);
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
