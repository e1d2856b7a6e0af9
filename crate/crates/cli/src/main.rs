mod args;

use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use xreval_core::analysis::{compare_modes, ModeComparison};
use xreval_core::catalog::{builtin_paper_catalog, Catalog, Duration};
use xreval_core::dsl::{parse_catalog, parse_modes};
use xreval_core::predictor::{predict_all, rank, sweep_predictions, Bindings, Prediction, SweepRange};
use xreval_core::report::{predictions_csv, ranking_csv, sweep_csv, Report};
use xreval_core::survey::{ingest_csv, score_all, write_scored_csv, ScoredResponse};

use args::{AnalyzeArgs, Cli, Command, Format, ModelArgs, OutputArgs, PredictArgs, ReportArgs, ScoreArgs, SweepArgs};

/// Exit 1: the inputs were read but are invalid. Exit 2: I/O or usage.
enum Failure {
    Invalid(String),
    Io(String),
}

impl Failure {
    fn invalid(e: impl Display) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Predict(a) => cmd_predict(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::SurveyScore(a) => cmd_survey_score(a),
        Command::SurveyAnalyze(a) => cmd_survey_analyze(a),
        Command::Report(a) => cmd_report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprint!("{}", error_line(&msg));
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprint!("{}", error_line(&msg));
            ExitCode::from(2)
        }
    }
}

fn error_line(s: &str) -> String {
    let mut s = format!("error: {s}");
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("cannot write standard output: {e}"))),
    }
}

fn unsupported(command: &str, format: Format) -> Failure {
    Failure::Io(format!("{command} does not support --format {format:?}").to_lowercase())
}

struct Loaded {
    bindings: Bindings,
    predictions: Vec<Prediction>,
}

fn load_models(a: &ModelArgs) -> Result<Loaded, Failure> {
    let mut catalog: Catalog = match &a.catalog {
        Some(path) => parse_catalog(&read(path)?).map_err(|e| Failure::Invalid(e.render(&path.display().to_string())))?,
        None => builtin_paper_catalog(),
    };
    for (symbol, ms) in &a.overrides {
        catalog = catalog
            .override_operator(symbol, Duration::Fixed(*ms))
            .map_err(|e| Failure::Invalid(format!("--override {symbol}={ms}: {e}")))?;
    }
    let models = parse_modes(&read(&a.model)?, &catalog)
        .map_err(|e| Failure::Invalid(e.render(&a.model.display().to_string())))?;
    let predictions = predict_all(&models, &catalog, a.repeat).map_err(Failure::invalid)?;
    Ok(Loaded {
        bindings: a.bindings.iter().cloned().collect(),
        predictions,
    })
}

fn render(report: &Report, o: &OutputArgs, csv: impl FnOnce() -> Option<String>, command: &str) -> Outcome {
    let text = match o.format {
        Format::Json => report.to_json(),
        Format::Markdown => report.to_markdown(),
        Format::Csv => csv().ok_or_else(|| unsupported(command, o.format))?,
    };
    emit(&o.out, &text)
}

fn cmd_predict(a: PredictArgs) -> Outcome {
    let l = load_models(&a.model)?;
    let report = Report::default().with_predictions(&l.predictions, &l.bindings);
    let entries = report.predictions.clone().unwrap_or_default();
    render(&report, &a.output, || Some(predictions_csv(&entries)), "predict")
}

fn cmd_compare(a: PredictArgs) -> Outcome {
    let l = load_models(&a.model)?;
    let ranking = rank(&l.predictions, &l.bindings).map_err(Failure::invalid)?;
    let csv = ranking_csv(&ranking);
    let report = Report {
        ranking: Some(ranking),
        ..Report::default()
    };
    render(&report, &a.output, || Some(csv), "compare")
}

fn cmd_sweep(a: SweepArgs) -> Outcome {
    let l = load_models(&a.model)?;
    let r = &a.range;
    let range = SweepRange::new(r.from, r.to, r.step).map_err(Failure::invalid)?;
    let sweep = sweep_predictions(&l.predictions, &r.param, range, &l.bindings).map_err(Failure::invalid)?;
    let csv = sweep_csv(&sweep);
    let report = Report {
        sweep: Some(sweep),
        ..Report::default()
    };
    render(&report, &a.output, || Some(csv), "sweep")
}

/// Reads, validates and scores a response file. Row problems go to stderr.
fn load_scores(path: &Path) -> Result<Vec<ScoredResponse>, Failure> {
    let shown = path.display();
    let ingested = ingest_csv(&read(path)?).map_err(|e| Failure::Invalid(format!("{shown}: {e}")))?;
    for d in &ingested.diagnostics {
        eprintln!("warning: {shown}: {d} (column {})", d.column);
    }
    score_all(&ingested.responses).map_err(|e| Failure::Invalid(format!("{shown}: {e}")))
}

fn cmd_survey_score(a: ScoreArgs) -> Outcome {
    let scored = load_scores(&a.input)?;
    if scored.is_empty() {
        return Err(Failure::Invalid(format!("{}: no valid rows to score", a.input.display())));
    }
    emit(&a.out, &write_scored_csv(&scored))
}

fn analyze(input: &Path, s: &args::SurveyArgs) -> Result<ModeComparison, Failure> {
    let scored = load_scores(input)?;
    let cmp = compare_modes(&scored, s.measure, s.alpha).map_err(|e| Failure::Invalid(format!("{}: {e}", input.display())))?;
    for w in &cmp.warnings {
        eprintln!("warning: {}: {w}", input.display());
    }
    Ok(cmp)
}

fn cmd_survey_analyze(a: AnalyzeArgs) -> Outcome {
    let cmp = analyze(&a.survey.input, &a.survey)?;
    let report = Report {
        survey: Some(cmp),
        ..Report::default()
    };
    render(&report, &a.output, || None, "survey-analyze")
}

fn cmd_report(a: ReportArgs) -> Outcome {
    let l = load_models(&a.model)?;
    let mut report = Report::default().with_predictions(&l.predictions, &l.bindings);
    match rank(&l.predictions, &l.bindings) {
        Ok(r) => report.ranking = Some(r),
        Err(e) => eprintln!("warning: ranking omitted: {e}"),
    }
    if let (Some(param), Some(from), Some(to), Some(step)) = (&a.param, a.from, a.to, a.step) {
        let range = SweepRange::new(from, to, step).map_err(Failure::invalid)?;
        report.sweep = Some(sweep_predictions(&l.predictions, param, range, &l.bindings).map_err(Failure::invalid)?);
    }
    if let Some(input) = &a.input {
        let s = args::SurveyArgs {
            input: input.clone(),
            measure: a.measure,
            alpha: a.alpha,
        };
        report.survey = Some(analyze(input, &s)?);
    }
    render(&report, &a.output, || None, "report")
}
