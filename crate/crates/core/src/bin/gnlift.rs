//! Command-line front end for the identity runner.
//!
//! Exit status: 0 when every entry passes, 1 when some entry fails,
//! 2 on usage or runtime errors.

use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gnlift::scenarios::{describe, SCENARIO_NAMES};
use gnlift::verify::config::ConfigFile;
use gnlift::verify::{run, IdentityReport, RunConfig, SignToggle, IDENTITIES};

#[derive(Parser)]
#[command(name = "gnlift", version, about = "Check second-fundamental-form identities of the normal lift in a tangent bundle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Sample points and evaluate every identity.
    Run {
        /// Scenario name or `all` [default: all, or the config file's value]
        #[arg(long)]
        scenario: Option<String>,
        /// Weight-family preset name, or a TOML config file
        #[arg(long, default_value = "sasaki")]
        family: String,
        /// Sample points per scenario [default: 10]
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// auto | plus | minus [default: auto]
        #[arg(long)]
        sign_toggle: Option<SignToggle>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Also write the JSON report here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    ListScenarios,
    ListIdentities,
    /// Render a saved JSON report as text.
    Report {
        #[arg(long)]
        input: PathBuf,
    },
}

fn base_config(family: &str) -> gnlift::Result<RunConfig> {
    let path = Path::new(family);
    if path.is_file() {
        RunConfig::from_file(&ConfigFile::load(path)?)
    } else {
        RunConfig::preset("all", family)
    }
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) -> std::io::Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == ErrorKind::BrokenPipe => Ok(()),
        other => other,
    }
}

fn execute(cli: Cli) -> Result<bool, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Run {
            scenario,
            family,
            points,
            seed,
            sign_toggle,
            format,
            output,
        } => {
            let mut cfg = base_config(&family)?;
            if let Some(s) = scenario {
                cfg.scenario = s;
            }
            if let Some(p) = points {
                cfg = cfg.with_points(p);
            }
            if let Some(s) = seed {
                cfg = cfg.with_seed(s);
            }
            if let Some(s) = sign_toggle {
                cfg = cfg.with_sign(s);
            }
            let report = run(&cfg)?;
            if let Some(path) = output {
                std::fs::write(path, report.to_json()?)?;
            }
            match format {
                Format::Json => emit(&(report.to_json()? + "\n"))?,
                Format::Text => emit(&report.to_text())?,
            }
            Ok(report.all_passed())
        }
        Command::ListScenarios => {
            let lines: String = SCENARIO_NAMES.iter().map(|n| format!("{n:<18} {}\n", describe(n))).collect();
            emit(&lines)?;
            Ok(true)
        }
        Command::ListIdentities => {
            let lines: String = IDENTITIES
                .iter()
                .map(|s| format!("{:<44} {:<11} {}\n", s.name, format!("{:?}", s.class).to_lowercase(), s.formula))
                .collect();
            emit(&lines)?;
            Ok(true)
        }
        Command::Report { input } => {
            let report = IdentityReport::from_json(&std::fs::read_to_string(input)?)?;
            emit(&report.to_text())?;
            Ok(report.all_passed())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
