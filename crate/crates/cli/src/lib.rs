//! The `vpcal` command line: benchmark synthesis, line labeling, evaluation
//! of calibration predictions and report rendering.
//!
//! Every command is a plain function over a parsed [`Cli`], so the same code
//! path runs from the binary and from tests.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod config;
mod error;
mod eval;
mod label;
mod report;
mod synth;

pub use config::{config_hash, Echo, EvalConfig, LabelConfig, PanoramaSource, SynthConfig};
pub use error::CliError;
pub use eval::{ground_truth_predictions, EvalOutput, Prediction, PredictionBody};
pub use label::VpFile;

/// File names inside an output directory.
pub mod files {
    pub const MANIFEST: &str = "manifest.jsonl";
    pub const SYNTH_CONFIG: &str = "synth_config.json";
    pub const LABEL_CONFIG: &str = "label_config.json";
    pub const EVAL_CSV: &str = "eval.csv";
    pub const EVAL_JSON: &str = "eval.json";
    pub const CURVE_CSV: &str = "curve.csv";
    pub const CURVE_SVG: &str = "curve.svg";
    pub const ERRORS: &str = "errors.txt";
}

#[derive(Debug, Parser)]
#[command(
    name = "vpcal",
    version,
    about = "Camera calibration benchmark toolkit"
)]
pub struct Cli {
    /// Worker threads for per-record work (default: all cores).
    #[arg(long, global = true, env = "VPCAL_WORKERS")]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render perspective views of a panorama with sampled cameras.
    Synth(SynthArgs),
    /// Label line segments and estimate pseudo horizontal VPs.
    Label(LabelArgs),
    /// Score calibration predictions against a manifest.
    Eval(EvalArgs),
    /// Render the cumulative horizon-error curve of an evaluation.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    Gsv,
    Sun360,
    Custom,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Dataset directory to create or overwrite.
    #[arg(long)]
    pub out: PathBuf,
    /// Base seed; each view derives its own seed from it.
    #[arg(long)]
    pub seed: u64,
    /// Number of views.
    #[arg(long, default_value_t = 10)]
    pub num: usize,
    /// Camera ranges: GSV-like, SUN360-like, or custom.
    #[arg(long, value_enum, default_value_t = Profile::Gsv)]
    pub profile: Profile,
    /// FoV range `lo,hi` in degrees (custom profile).
    #[arg(long, value_parser = parse_range)]
    pub fov: Option<(f64, f64)>,
    /// Pitch range `lo,hi` in degrees (custom profile).
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub pitch: Option<(f64, f64)>,
    /// Roll range `lo,hi` in degrees (custom profile).
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub roll: Option<(f64, f64)>,
    /// Output image side in pixels.
    #[arg(long, default_value_t = vpcal_core::synth::DEFAULT_SIZE)]
    pub size: u32,
    /// Equirectangular panorama; the built-in room is used when absent.
    #[arg(long)]
    pub panorama: Option<PathBuf>,
    /// Width of the built-in room panorama.
    #[arg(long, default_value_t = 2048)]
    pub pano_width: u32,
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    /// `manifest.jsonl` written by `vpcal synth`.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Seed for line subsampling and candidate pairs.
    #[arg(long)]
    pub seed: u64,
    /// Sampled line pairs per image.
    #[arg(long, default_value_t = vpcal_core::labeling::DEFAULT_CANDIDATE_COUNT)]
    pub count: usize,
    /// Convergent threshold on the point-line distance [default: sin 2 deg].
    #[arg(long)]
    pub delta0: Option<f64>,
    /// Non-convergent threshold [default: sin 5 deg].
    #[arg(long)]
    pub delta1: Option<f64>,
    /// Consensus and horizon-filter threshold [default: sin 2.5 deg].
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Ground-truth `manifest.jsonl`.
    #[arg(long)]
    pub manifest: PathBuf,
    /// JSON-lines predictions, one object per image.
    #[arg(long)]
    pub predictions: PathBuf,
    /// Directory for `eval.csv` and `eval.json`.
    #[arg(long)]
    pub out: PathBuf,
    /// Upper bound of the horizon-error axis, fraction of image height.
    #[arg(long, default_value_t = vpcal_core::metrics::DEFAULT_AUC_X_MAX)]
    pub auc_max: f64,
    /// Score predictions even when their config hash does not match.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// `eval.json` written by `vpcal eval`.
    #[arg(long)]
    pub report: PathBuf,
    /// Directory for `curve.csv` and `curve.svg`.
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected lo,hi, got {s:?}"))?;
    let p = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

/// Runs one parsed command line.
pub fn run(cli: Cli) -> Result<(), CliError> {
    let pool = worker_pool(cli.workers)?;
    match cli.command {
        Command::Synth(a) => synth::run(&a, &pool),
        Command::Label(a) => label::run(&a, &pool),
        Command::Eval(a) => eval::run(&a, &pool),
        Command::Report(a) => report::run(&a),
    }
}

fn worker_pool(workers: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    if workers == Some(0) {
        return Err(CliError::Config("worker count must be at least 1".into()));
    }
    let n = workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))
}

/// Logs per-record failures, writes them to `errors.txt` and returns the
/// first one in record order.
pub(crate) fn report_record_errors(
    dir: &std::path::Path,
    errors: Vec<(String, CliError)>,
) -> Result<(), CliError> {
    let path = dir.join(files::ERRORS);
    if errors.is_empty() {
        if path.exists() {
            std::fs::remove_file(&path).map_err(|e| CliError::io(&path, e))?;
        }
        return Ok(());
    }
    let mut text = String::new();
    for (id, e) in &errors {
        log::error!("{id}: {e}");
        text.push_str(&format!("{id}\t{}\t{e}\n", e.exit_code()));
    }
    vpcal_core::synth::write_atomic(&path, text.as_bytes())?;
    let (id, first) = errors.into_iter().next().expect("nonempty");
    let msg = |m: String| format!("record {id}: {m}");
    Err(match first {
        CliError::Config(m) => CliError::Config(msg(m)),
        CliError::Data(m) => CliError::Data(msg(m)),
        CliError::Geometry(m) => CliError::Geometry(msg(m)),
    })
}
