use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use symmcomp::{emit_outputs, run, BenchError, Execution, ExperimentConfig, Verdict};

/// Overrides the worker count when `--jobs` is absent.
const JOBS_ENV: &str = "SYMMCOMP_JOBS";

#[derive(Parser)]
#[command(name = "symmcomp", version, about = "Symmetrization comparison benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Output directory for report.csv, profiles.csv and plot.gp.
        #[arg(long, default_value = "symmcomp-out")]
        out: PathBuf,
        /// Replaces `run.seed` from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; 1 runs sequentially. Takes precedence over
        /// SYMMCOMP_JOBS.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, short)]
        verbose: bool,
    },
}

/// `--jobs`, then `SYMMCOMP_JOBS`, then the pool default.
fn jobs(flag: Option<usize>) -> Result<Option<usize>, String> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(JOBS_ENV) {
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(Some(k)),
            _ => Err(format!("{JOBS_ENV} must be a positive integer, got {raw:?}")),
        },
        Err(_) => Ok(None),
    }
}

fn main() -> ExitCode {
    let Command::Run {
        config,
        out,
        seed,
        jobs: jobs_flag,
        verbose,
    } = Cli::parse().command;
    let level = if verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    if jobs_flag == Some(0) {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(1);
    }
    let jobs = match jobs(jobs_flag) {
        Ok(j) => j,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(1);
        }
    };
    match execute(&config, &out, seed, Execution::with_jobs(jobs)) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(path: &Path, out: &Path, seed: Option<u64>, exec: Execution) -> Result<Verdict, BenchError> {
    let mut config = ExperimentConfig::from_file(path)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    log::info!("{} run from {}", config.mode.as_str(), path.display());
    let report = run(&config, exec)?;
    emit_outputs(&report, out)?;
    for c in report.failures() {
        eprintln!(
            "FAIL {} {}: measured {} expected {} {}",
            c.run, c.name, c.measured, c.expected, c.detail
        );
    }
    let verdict = report.verdict();
    println!("verdict: {}", verdict.as_str());
    Ok(verdict)
}
