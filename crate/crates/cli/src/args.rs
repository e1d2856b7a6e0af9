use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use xreval_core::analysis::{Measure, DEFAULT_ALPHA};

#[derive(Parser, Debug)]
#[command(name = "xreval", version, about = "GOMS task-time prediction and survey analysis for interaction modes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Per-mode predicted task time with operator and category breakdown
    Predict(PredictArgs),
    /// Rank modes by resolved total time
    Compare(PredictArgs),
    /// Evaluate all modes across a parameter range and locate crossovers
    Sweep(SweepArgs),
    /// Score SUS and NASA-TLX responses into a CSV
    SurveyScore(ScoreArgs),
    /// Descriptives, Friedman and pairwise Wilcoxon for one measure
    SurveyAnalyze(AnalyzeArgs),
    /// Combined predictions, ranking, optional sweep and optional survey analysis
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Markdown,
    Csv,
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    /// Operator catalog; the built-in catalog when omitted
    #[arg(long, value_name = "PATH")]
    pub catalog: Option<PathBuf>,
    /// Mode definitions
    #[arg(long, value_name = "PATH")]
    pub model: PathBuf,
    /// Bind a symbolic duration in ms, e.g. A=500 (repeatable)
    #[arg(long = "bind", value_name = "NAME=INT", value_parser = parse_pair)]
    pub bindings: Vec<(String, u64)>,
    /// Replace an operator's duration with a fixed value in ms (repeatable)
    #[arg(long = "override", value_name = "SYM=MS", value_parser = parse_pair)]
    pub overrides: Vec<(String, u64)>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub repeat: u32,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    pub format: Format,
    /// Write here instead of standard output
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PredictArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct RangeArgs {
    #[arg(long, value_name = "NAME")]
    pub param: String,
    #[arg(long)]
    pub from: u64,
    #[arg(long)]
    pub to: u64,
    #[arg(long)]
    pub step: u64,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ScoreArgs {
    /// Response CSV
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SurveyArgs {
    /// Response CSV
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// sus, tlx_raw, tlx_weighted or tlx:SUBSCALE
    #[arg(long, default_value = "sus")]
    pub measure: Measure,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub survey: SurveyArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Response CSV for the survey section
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
    #[arg(long, default_value = "sus", requires = "input")]
    pub measure: Measure,
    #[arg(long, default_value_t = DEFAULT_ALPHA, requires = "input")]
    pub alpha: f64,
    /// Adds a sweep section over this parameter
    #[arg(long, value_name = "NAME", requires_all = ["from", "to", "step"])]
    pub param: Option<String>,
    #[arg(long, requires = "param")]
    pub from: Option<u64>,
    #[arg(long, requires = "param")]
    pub to: Option<u64>,
    #[arg(long, requires = "param")]
    pub step: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_pair(s: &str) -> Result<(String, u64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=INT, got `{s}`"))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(format!("missing name in `{s}`"));
    }
    let value = value
        .trim()
        .parse::<u64>()
        .map_err(|_| format!("`{}` is not a non-negative integer", value.trim()))?;
    Ok((name.to_string(), value))
}
