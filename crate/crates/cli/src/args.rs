//! Command-line flags. Every option struct also deserializes from the matching
//! table of the config file; flags given on the command line win.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(
    name = "coherent-keyrate",
    version,
    about = "Coherence-based QKD key rates"
)]
pub struct Cli {
    /// TOML file with defaults for any flag (one table per subcommand)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads for sweeps [default: $COHERENT_KEYRATE_JOBS, else 1]
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single-point key rate for one protocol
    Keyrate(KeyrateArgs),
    /// Rates versus the Z-basis unbalance alpha
    SweepAlpha(SweepAlphaArgs),
    /// Rates versus the detector-efficiency ratio x
    SweepMismatch(SweepMismatchArgs),
    /// Full report for a two-qubit state file
    Analyze(AnalyzeArgs),
    /// Compare classical and coherent error correction on n pairs
    QecDemo(QecDemoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolArg {
    Bb84,
    Bb84Opt,
    Six,
    SixOpt,
    Mismatch,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct KeyrateArgs {
    #[arg(value_enum)]
    pub protocol: Option<ProtocolArg>,
    /// Bit error rate (Z basis)
    #[arg(long)]
    pub eb: Option<f64>,
    /// Phase error rate (X basis)
    #[arg(long)]
    pub ep: Option<f64>,
    /// Error rate in the X basis
    #[arg(long)]
    pub ex: Option<f64>,
    /// Error rate in the Y basis
    #[arg(long)]
    pub ey: Option<f64>,
    /// Error rate in the Z basis
    #[arg(long)]
    pub ez: Option<f64>,
    /// Z-basis outcome probabilities m00,m01,m10,m11
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub m: Option<Vec<f64>>,
    /// Unbalance of the Z-basis outcomes (fine-grained protocols)
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Detector-efficiency ratio eta0 / (eta0 + eta1)
    #[arg(long)]
    pub x: Option<f64>,
    /// Detection efficiency for bit 0
    #[arg(long)]
    pub eta0: Option<f64>,
    /// Detection efficiency for bit 1
    #[arg(long)]
    pub eta1: Option<f64>,
    /// Also write the result as a CSV row
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct SweepAlphaArgs {
    /// Common error rate e_x = e_y = e_z
    #[arg(long)]
    pub e: Option<f64>,
    /// First alpha
    #[arg(long)]
    pub start: Option<f64>,
    /// Last alpha
    #[arg(long)]
    pub stop: Option<f64>,
    /// Number of grid points
    #[arg(long)]
    pub steps: Option<usize>,
    /// CSV destination (stdout when absent)
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Also render an SVG chart
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct SweepMismatchArgs {
    /// Phase error rate
    #[arg(long)]
    pub ep: Option<f64>,
    /// Bit error rate
    #[arg(long)]
    pub eb: Option<f64>,
    /// First x
    #[arg(long)]
    pub start: Option<f64>,
    /// Last x
    #[arg(long)]
    pub stop: Option<f64>,
    /// Number of grid points
    #[arg(long)]
    pub steps: Option<usize>,
    /// CSV destination (stdout when absent)
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Also render an SVG chart
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct AnalyzeArgs {
    /// State file (dims, re, im)
    pub file: Option<PathBuf>,
    /// Detection efficiency for bit 0 (enables the mismatch report)
    #[arg(long)]
    pub eta0: Option<f64>,
    /// Detection efficiency for bit 1
    #[arg(long)]
    pub eta1: Option<f64>,
    /// Random restarts for the measurement-basis search
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Seed for the basis search
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct QecDemoArgs {
    /// Number of pairs
    #[arg(long)]
    pub n: Option<usize>,
    /// Hashing matrix, one row of 0/1 characters per line
    #[arg(long)]
    pub hashing: Option<PathBuf>,
    /// Input state file; a Bell-diagonal state from --eb/--ep otherwise
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Bit error rate of the default state
    #[arg(long)]
    pub eb: Option<f64>,
    /// Phase error rate of the default state
    #[arg(long)]
    pub ep: Option<f64>,
}

/// Fills every unset field of `$flags` from `$file`.
macro_rules! fill_from {
    ($flags:expr, $file:expr; $($field:ident),+ $(,)?) => {{
        let file = $file;
        $( if $flags.$field.is_none() { $flags.$field = file.$field; } )+
    }};
}

impl KeyrateArgs {
    pub fn fill_from(&mut self, file: Self) {
        fill_from!(self, file; protocol, eb, ep, ex, ey, ez, m, alpha, x, eta0, eta1, csv);
    }
}

impl SweepAlphaArgs {
    pub fn fill_from(&mut self, file: Self) {
        fill_from!(self, file; e, start, stop, steps, out, svg);
    }
}

impl SweepMismatchArgs {
    pub fn fill_from(&mut self, file: Self) {
        fill_from!(self, file; ep, eb, start, stop, steps, out, svg);
    }
}

impl AnalyzeArgs {
    pub fn fill_from(&mut self, file: Self) {
        fill_from!(self, file; file, eta0, eta1, restarts, seed);
    }
}

impl QecDemoArgs {
    pub fn fill_from(&mut self, file: Self) {
        fill_from!(self, file; n, hashing, state, eb, ep);
    }
}

/// Parsed config file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub jobs: Option<usize>,
    pub keyrate: KeyrateArgs,
    pub sweep_alpha: SweepAlphaArgs,
    pub sweep_mismatch: SweepMismatchArgs,
    pub analyze: AnalyzeArgs,
    pub qec_demo: QecDemoArgs,
}

impl ConfigFile {
    pub fn parse(text: &str, path: &str) -> crate::error::CliResult<Self> {
        toml::from_str(text).map_err(|e| crate::error::CliError::Config {
            path: path.to_string(),
            message: e.message().trim().to_string(),
        })
    }
}

/// Applies the config file beneath the flags.
pub fn apply_config(cli: &mut Cli, cfg: ConfigFile) {
    if cli.jobs.is_none() {
        cli.jobs = cfg.jobs;
    }
    match &mut cli.command {
        Command::Keyrate(a) => a.fill_from(cfg.keyrate),
        Command::SweepAlpha(a) => a.fill_from(cfg.sweep_alpha),
        Command::SweepMismatch(a) => a.fill_from(cfg.sweep_mismatch),
        Command::Analyze(a) => a.fill_from(cfg.analyze),
        Command::QecDemo(a) => a.fill_from(cfg.qec_demo),
    }
}
