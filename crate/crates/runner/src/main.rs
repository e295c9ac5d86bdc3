use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use loclab_runner::catalog;
use loclab_runner::config::{Experiment, ExperimentConfig, Format, Overrides, SystemSpec};
use loclab_runner::error::{Result, RunError};
use loclab_runner::export;

/// Numerical lab for localization no-go theorems on finite lattices.
#[derive(Parser)]
#[command(name = "loclab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiments in a JSON config.
    Run {
        config: PathBuf,
        /// Write the machine-readable report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<Format>,
        /// Replace the configured systems with this one.
        #[arg(long)]
        system: Option<String>,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        mass: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List the system catalog.
    List {
        #[arg(long)]
        json: bool,
    },
    /// Print the condition matrix of one system.
    Matrix {
        #[arg(long)]
        system: String,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        mass: Option<f64>,
        /// Emit the report instead of the table.
        #[arg(long)]
        format: Option<Format>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<u8> {
    match command {
        Command::Run {
            config,
            out,
            format,
            system,
            size,
            mass,
            seed,
        } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| RunError::InvalidConfig(format!("{}: {e}", config.display())))?;
            let mut cfg = ExperimentConfig::from_json(&text)?;
            cfg.apply(&Overrides {
                system,
                size,
                mass,
                seed,
                out,
                format,
            });
            cfg.validate()?;
            execute(&cfg, true)
        }
        Command::List { json } => {
            let entries = catalog::list_systems();
            if json {
                emit(&format!("{}\n", serde_json::to_string_pretty(&entries).expect("catalog serializes")), false);
            } else {
                let mut text = String::new();
                for e in entries {
                    let params: Vec<String> = e.parameters.iter().map(|p| format!("{}={}", p.name, p.default)).collect();
                    text += &format!("{:<26}{:<9}{}\n", e.name, e.variant, e.description);
                    text += &format!("{:<35}{}\n", "", params.join(" "));
                }
                emit(&text, false);
            }
            Ok(0)
        }
        Command::Matrix {
            system,
            size,
            mass,
            format,
        } => {
            let mut cfg = ExperimentConfig {
                systems: vec![SystemSpec {
                    size,
                    mass,
                    ..SystemSpec::named(&system)
                }],
                experiments: vec![Experiment::Matrix],
                tolerances: Default::default(),
                output: Default::default(),
                seed: 0,
            };
            if let Some(f) = format {
                cfg.output.format = f;
            }
            cfg.validate()?;
            execute(&cfg, format.is_some())
        }
    }
}

/// Runs and emits the report. Exit code 2 when an invariant is violated.
fn execute(cfg: &ExperimentConfig, machine: bool) -> Result<u8> {
    let report = loclab_runner::run(cfg)?;
    let summary = export::human(&report);
    match (&cfg.output.path, machine) {
        (Some(path), _) => {
            std::fs::write(path, export::export(&report, cfg.output.format)?)?;
            emit(&summary, false);
        }
        (None, true) => {
            emit(&export::export(&report, cfg.output.format)?, false);
            emit(&summary, true);
        }
        (None, false) => emit(&summary, false),
    }
    Ok(if report.violations().is_empty() { 0 } else { 2 })
}

/// Writes without panicking when the reader has gone away.
fn emit(text: &str, stderr: bool) {
    let _ = if stderr {
        std::io::stderr().lock().write_all(text.as_bytes())
    } else {
        std::io::stdout().lock().write_all(text.as_bytes())
    };
}
