//! Command-line front end: single-point rates, sweeps, state analysis and the
//! error-correction demo, with CSV and SVG output.

pub mod args;
pub mod commands;
pub mod error;
pub mod format;
pub mod svg;

use std::io::Write;

use args::{apply_config, Cli, Command, ConfigFile};
use error::{CliError, CliResult};

pub const JOBS_ENV: &str = "COHERENT_KEYRATE_JOBS";

/// Worker count: flag or config file, then the environment, then 1.
pub fn resolve_jobs(cli_jobs: Option<usize>, env: Option<String>) -> CliResult<usize> {
    let jobs = match (cli_jobs, env) {
        (Some(j), _) => j,
        (None, Some(v)) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{JOBS_ENV}={v:?} is not a thread count")))?,
        (None, None) => 1,
    };
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    Ok(jobs)
}

/// Runs a parsed command line, writing reports to `out`.
pub fn run<W: Write>(mut cli: Cli, out: &mut W) -> CliResult<()> {
    if let Some(path) = cli.config.clone() {
        let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        apply_config(
            &mut cli,
            ConfigFile::parse(&text, &path.display().to_string())?,
        );
    }
    let jobs = resolve_jobs(cli.jobs, std::env::var(JOBS_ENV).ok())?;
    match &cli.command {
        Command::Keyrate(a) => commands::cmd_keyrate(a, out),
        Command::SweepAlpha(a) => commands::cmd_sweep_alpha(a, jobs, out),
        Command::SweepMismatch(a) => commands::cmd_sweep_mismatch(a, jobs, out),
        Command::Analyze(a) => commands::cmd_analyze(a, out),
        Command::QecDemo(a) => commands::cmd_qec_demo(a, out),
    }
}
