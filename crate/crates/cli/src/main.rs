//! `semistar` — script-driven workbench for semistar operations.
//!
//! Exit codes: 0 when no record failed, 1 when any FAIL verdict was
//! recorded (Undecided does not fail), 2 for parse/validation/IO problems.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use semistar_cli::{emit, exec, script};

#[derive(Parser)]
#[command(name = "semistar", version, about = "semistar operation workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a script and report per-statement verdicts.
    Run {
        script: PathBuf,
        /// Write the report to this file instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_parser = ["text", "json"], default_value = "text")]
        format: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Coefficient height cap for witness searches.
        #[arg(long, default_value_t = 1000)]
        bound_height: i64,
        /// Degree cap for witness-search multipliers.
        #[arg(long, default_value_t = 6)]
        bound_degree: usize,
        /// Worker threads for check/suite statements; records still merge
        /// in script order.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Stop at the first execution error (implies sequential execution).
        #[arg(long)]
        strict: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            script,
            report,
            format,
            seed,
            bound_height,
            bound_degree,
            jobs,
            strict,
        } => {
            let opts = exec::Options {
                seed,
                bound_height,
                bound_degree,
                jobs,
                strict,
                ..exec::Options::default()
            };
            match run(&script, report.as_deref(), &format, opts) {
                Ok(false) => ExitCode::SUCCESS,
                Ok(true) => ExitCode::from(1),
                Err(message) => {
                    eprintln!("error: {message}");
                    ExitCode::from(2)
                }
            }
        }
    }
}

fn run(
    path: &Path,
    report_path: Option<&Path>,
    format: &str,
    opts: exec::Options,
) -> Result<bool, String> {
    let source =
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let parsed = script::parse_script(&source).map_err(|e| e.to_string())?;
    script::validate(&parsed).map_err(|e| e.to_string())?;
    let seed = opts.seed;
    let bounds = opts.bounds_line();
    let out = exec::run_script(&parsed, opts);
    let envelope = emit::Envelope::new(path.display().to_string(), seed, bounds, out.records);
    let body = match format {
        "json" => envelope.to_json(),
        _ => envelope.to_text(),
    };
    match report_path {
        Some(p) => std::fs::write(p, &body).map_err(|e| format!("{}: {e}", p.display()))?,
        None => print!("{body}"),
    }
    Ok(envelope.failed())
}
