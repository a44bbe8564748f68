use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use dynlab::setfile::{check_set_config, load_set, Family, FamilyArgs};
use dynlab::{run_experiment, write_atomic, ExperimentConfig, Format, Report};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Exit codes: 0 all verified, 1 some refuted, 2 inconclusive, 3 or more on error.
#[derive(Parser)]
#[command(name = "dynlab", version, about = "Windowed experiments on recurrence-set families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and emit its report.
    Run {
        config: PathBuf,
        /// Overrides the config's `output`; stdout when neither is given.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check one set file against a family claim.
    CheckSet {
        setfile: PathBuf,
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        g: Option<usize>,
        #[arg(long = "L", visible_alias = "l")]
        l: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long)]
        corpus_max: Option<u64>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Re-emit a stored JSON report.
    Report {
        report: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Run { config, out, format } => {
            let cfg = ExperimentConfig::load(&config)?;
            let report = run_experiment(&cfg)?;
            emit(&report.render(format)?, out.as_deref().or(cfg.output.as_deref()))?;
            Ok(report.exit_code())
        }
        Command::CheckSet { setfile, family, g, l, k, bound, corpus_max, horizon, out, format } => {
            let text = std::fs::read_to_string(&setfile).with_context(|| format!("cannot read {}", setfile.display()))?;
            let (set, h) = load_set(&text, horizon)?;
            let cfg = check_set_config(set, h, family, &FamilyArgs { g, l, k, bound, corpus_max })?;
            let report = run_experiment(&cfg)?;
            emit(&report.render(format)?, out.as_deref())?;
            Ok(report.exit_code())
        }
        Command::Report { report, format, out } => {
            let text = std::fs::read_to_string(&report).with_context(|| format!("cannot read {}", report.display()))?;
            let r = Report::from_json(&text)?;
            emit(&r.render(format)?, out.as_deref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("dynlab: {e:#}");
            ExitCode::from(3)
        }
    }
}
