//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 1 runtime or data
//! error. Every file-producing command writes a [`RunManifest`] next to its
//! output; `tsstyle replay <manifest>` reruns it.

mod commands;
mod manifest;

use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use manifest::{manifest_path, RunManifest, VERSION};

use crate::error::Error;

#[derive(Debug, Parser)]
#[command(name = "tsstyle", version, about = "Time series style transfer toolkit")]
pub struct Cli {
    /// Suppress the one-line summary on standard output.
    #[arg(short, long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic series.
    #[command(subcommand)]
    Gen(GenKind),
    /// Cut a series into sliding windows and split train/test.
    Window(WindowArgs),
    /// Stylize randomly paired content and style windows.
    Stylize(StylizeArgs),
    /// Apply a baseline augmentation to every window.
    Augment(AugmentArgs),
    /// Score a synthetic dataset against real windows.
    Eval(EvalArgs),
    /// Rerun the command recorded in a manifest.
    Replay {
        manifest: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Two-regime AR(1) with a coefficient switch.
    SwitchingAr1(SwitchingArArgs),
}

#[derive(Debug, Args)]
pub struct SwitchingArArgs {
    /// Number of generated values.
    #[arg(long = "t", default_value_t = 3030)]
    pub t: usize,
    #[arg(long, default_value_t = 0.01, allow_hyphen_values = true)]
    pub a10: f64,
    #[arg(long, default_value_t = 1.001, allow_hyphen_values = true)]
    pub a11: f64,
    #[arg(long, default_value_t = -0.01, allow_hyphen_values = true)]
    pub a20: f64,
    #[arg(long, default_value_t = 0.999, allow_hyphen_values = true)]
    pub a21: f64,
    #[arg(long, default_value_t = 0.8)]
    pub switch_fraction: f64,
    #[arg(long, default_value_t = 1.0)]
    pub noise_std: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Column name or 0-based index.
    #[arg(long, default_value = "0")]
    pub column: String,
    /// Window size; windows hold `w + 1` values.
    #[arg(long, default_value_t = 30)]
    pub w: usize,
    #[arg(long, default_value_t = 2400)]
    pub train: usize,
    #[arg(long)]
    pub out_prefix: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReturnKindArg {
    Log,
    Simple,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PositivityArg {
    Error,
    AffineRescale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EdgeArg {
    Shrink,
    Reflect,
}

/// Inclusive `lo:hi` range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Span<T>(pub T, pub T);

impl<T: FromStr> FromStr for Span<T> {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
        let parse = |v: &str| v.trim().parse::<T>().map_err(|_| format!("bad bound {v:?} in {s:?}"));
        Ok(Span(parse(lo)?, parse(hi)?))
    }
}

impl<T: std::fmt::Display> std::fmt::Display for Span<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.0, self.1)
    }
}

#[derive(Debug, Args)]
pub struct StylizeArgs {
    /// Content window CSV; the same file as --style means in-sample content.
    #[arg(long)]
    pub content: PathBuf,
    #[arg(long)]
    pub style: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub gamma: f64,
    #[arg(long, default_value_t = 250)]
    pub iterations: usize,
    #[arg(long, default_value_t = 0.01)]
    pub base_lr: f64,
    #[arg(long, default_value_t = 0.9)]
    pub rms_decay: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub rms_epsilon: f64,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub return_best: bool,
    #[arg(long, default_value_t = 10)]
    pub tau_max: usize,
    #[arg(long, value_enum, default_value_t = ReturnKindArg::Log)]
    pub return_kind: ReturnKindArg,
    #[arg(long, value_enum, default_value_t = PositivityArg::AffineRescale)]
    pub positivity_policy: PositivityArg,
    #[arg(long, default_value_t = 5)]
    pub trend_window: usize,
    #[arg(long, value_enum, default_value_t = EdgeArg::Shrink)]
    pub edge_policy: EdgeArg,
    /// Shock each content window with a random step before stylizing.
    #[arg(long, num_args = 0..=1, default_value_t = false, default_missing_value = "true", action = clap::ArgAction::Set)]
    pub perturb: bool,
    /// Step amplitude range; defaults to two mean window standard deviations.
    #[arg(long, allow_hyphen_values = true)]
    pub shock_amp: Option<Span<f64>>,
    /// Step position range (0-based, inclusive); defaults to the middle half.
    #[arg(long)]
    pub shock_shift: Option<Span<usize>>,
    /// Drop failed samples instead of aborting.
    #[arg(long, num_args = 0..=1, default_value_t = false, default_missing_value = "true", action = clap::ArgAction::Set)]
    pub skip_errors: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker thread cap.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AugmentMethod {
    Jitter,
    Flip,
    Timewarp,
}

#[derive(Debug, Args)]
pub struct AugmentArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub method: AugmentMethod,
    #[arg(long, default_value_t = 0.03)]
    pub sigma: f64,
    #[arg(long, default_value_t = 4)]
    pub knots: usize,
    #[arg(long, default_value_t = 0.2)]
    pub warp_std: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub real_train: PathBuf,
    #[arg(long)]
    pub real_test: PathBuf,
    #[arg(long)]
    pub synth: PathBuf,
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub ridge: f64,
    /// Also train on real_train plus the first L synthetic windows.
    #[arg(long)]
    pub augment_level: Option<usize>,
    /// Report file; `.json`/`.jsonl` gives a JSON line, anything else CSV.
    /// Without it the JSON line goes to standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidConfig(_)
        | Error::BadSplit { .. }
        | Error::KTooLarge { .. }
        | Error::LagTooLarge { .. }
        | Error::WindowTooLarge { .. } => 2,
        Error::Sample { source, .. } | Error::Stylization { source, .. } => exit_code(source),
        _ => 1,
    }
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match commands::dispatch(cli.command, cli.quiet) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
