use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lrc_core::CurvatureKind;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "lrc", version, about = "Edge curvature, curvature-based pruning and community evaluation")]
pub struct Cli {
    /// Worker threads for parallel stages. Output does not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// key=value file with defaults for any long flag; flags on the command
    /// line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-edge curvature as CSV.
    Curvature(CurvatureArgs),
    /// Prune low-curvature edges.
    Preprocess(PreprocessArgs),
    /// Block model grid study of curvature separation scores.
    Simulate(SimulateArgs),
    /// Community detection.
    Detect(DetectArgs),
    /// Compare two community assignments.
    Eval(EvalArgs),
    /// Detection and evaluation before and after pruning, over many seeds.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// `.gml` files are GML, everything else an edge list.
    Auto,
    Edgelist,
    Gml,
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Edge list or GML file.
    #[arg(long, short)]
    pub input: PathBuf,

    #[arg(long, value_enum, default_value = "auto")]
    pub format: InputFormat,
}

#[derive(Debug, Args)]
pub struct CurvatureArgs {
    #[command(flatten)]
    pub graph: GraphInput,

    #[arg(long, default_value = "lrc")]
    pub measure: CurvatureKind,

    /// Defaults to standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PreprocessArgs {
    #[command(flatten)]
    pub graph: GraphInput,

    /// Pruned edge list.
    #[arg(long, short)]
    pub output: PathBuf,

    /// JSON report; defaults to standard output.
    #[arg(long)]
    pub report: Option<PathBuf>,

    /// `auto` for the mixture valley, or a number to prune at.
    #[arg(long, default_value = "auto")]
    pub threshold: String,

    #[arg(long, default_value = "lrc")]
    pub curvature: CurvatureKind,

    /// Also write the per-edge curvature CSV of the input graph.
    #[arg(long)]
    pub curvature_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 100)]
    pub n: usize,

    #[arg(long, default_value_t = 2)]
    pub k: usize,

    #[arg(long, default_value_t = 100)]
    pub replicates: usize,

    #[arg(long, value_delimiter = ',', default_value = "bfc,frc,lrc,orc")]
    pub curvatures: Vec<CurvatureKind>,

    /// Grid cells as `p1:p2` pairs, comma separated. Defaults to the
    /// built-in 10 × 10 grid.
    #[arg(long, value_delimiter = ',')]
    pub cells: Vec<String>,

    #[arg(long)]
    pub seed: Option<u64>,

    /// Defaults to standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Lpa,
    Components,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub graph: GraphInput,

    #[arg(long, value_enum, default_value = "lpa")]
    pub algo: Algo,

    /// Required for `lpa`.
    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long, default_value_t = lrc_core::metrics::DEFAULT_MAX_SWEEPS)]
    pub max_sweeps: usize,

    /// Defaults to standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Ari,
    Ami,
    F1,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub metric: Metric,

    /// Label file (`node label`), community file for `f1`, or GML.
    #[arg(long)]
    pub truth: PathBuf,

    #[arg(long)]
    pub pred: PathBuf,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub graph: GraphInput,

    /// Ground-truth label file; GML inputs carry their own labels.
    #[arg(long)]
    pub truth: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "lpa")]
    pub algo: Algo,

    #[arg(long, default_value = "lrc")]
    pub curvature: CurvatureKind,

    #[arg(long)]
    pub seed: Option<u64>,

    /// Detection runs; run `r` uses seed `seed + r`.
    #[arg(long, default_value_t = 1)]
    pub runs: usize,

    /// Defaults to standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn flag_present(args: &[OsString], key: &str) -> bool {
    let long = format!("--{key}");
    let prefix = format!("--{key}=");
    args.iter().any(|a| {
        let a = a.to_string_lossy();
        a == long || a.starts_with(&prefix)
    })
}

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(rest));
        }
    }
    None
}

/// Appends `--key value` for each config entry not given on the command
/// line. `key = true` becomes a bare flag.
pub fn with_config(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    let mut out = args;
    let mut extra = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Format(format!(
                "{}: line {}: expected key=value",
                path.display(),
                i + 1
            )));
        };
        let (key, value) = (key.trim(), value.trim());
        if key == "config" {
            continue;
        }
        if flag_present(&out, key) {
            continue;
        }
        extra.push(OsString::from(format!("--{key}")));
        if value != "true" {
            extra.push(OsString::from(value));
        }
    }
    out.extend(extra);
    Ok(out)
}
