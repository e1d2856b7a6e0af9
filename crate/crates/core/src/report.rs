//! JSON, Markdown and CSV renderers for predictions, rankings, sweeps and
//! survey analyses.
//!
//! Output is byte-for-byte deterministic: maps are ordered, floats use
//! fixed precision in text formats, and JSON follows
//! `schema/report.schema.json`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::analysis::ModeComparison;
use crate::catalog::OperatorCategory;
use crate::predictor::{AffineTime, Bindings, CrossoverReport, OperatorContribution, Prediction, Ranking};
use crate::stats::{Method, TestResult};
use crate::TOOL_VERSION;

/// JSON schema for [`Report`].
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

/// Totals printed in the source study for its three modes, which do not
/// match the sums of its own operator durations.
const PUBLISHED_TOTALS: [(&str, &str); 3] = [
    ("Eye-gaze & Pinch", "4631"),
    ("Eye-gaze & Voice", "5217"),
    ("Drag & Drop", "6963 + A"),
];

pub const PUBLISHED_TOTALS_FOOTNOTE: &str = "Published totals are the values printed in the source study for one \
pick-and-place action. For Eye-gaze & Pinch the study's formula line gives 3885 ms while its results text gives \
4631 ms. None of the published totals equals the sum of the study's own operator durations (4731, 5933 and \
7809 + A ms), and no single corrected duration reconciles them. Predicted totals in this report are the exact \
sums of the catalog durations.";

pub fn published_total(mode: &str) -> Option<&'static str> {
    PUBLISHED_TOTALS.iter().find(|(m, _)| *m == mode).map(|(_, t)| *t)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictionEntry {
    pub mode: String,
    pub repeat: u32,
    pub operator_count: u64,
    pub constant_ms: u64,
    pub params: BTreeMap<String, u64>,
    pub lower_bound_ms: u64,
    /// Present when the bindings resolve every parameter.
    pub total_ms: Option<u64>,
    pub published_total: Option<String>,
    pub per_category: BTreeMap<OperatorCategory, AffineTime>,
    pub per_operator: Vec<OperatorContribution>,
}

impl PredictionEntry {
    pub fn new(p: &Prediction, bindings: &Bindings) -> Self {
        PredictionEntry {
            mode: p.mode.clone(),
            repeat: p.repeat,
            operator_count: p.per_operator.iter().map(|o| o.count).sum(),
            constant_ms: p.constant_ms(),
            params: p.param_coeffs().iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            lower_bound_ms: p.lower_bound(),
            total_ms: p.bind(bindings).ok(),
            published_total: (p.repeat == 1)
                .then(|| published_total(&p.mode))
                .flatten()
                .map(str::to_string),
            per_category: p.per_category.clone(),
            per_operator: p.per_operator.clone(),
        }
    }

    fn expression(&self) -> String {
        let mut a = AffineTime::constant(self.constant_ms);
        for (k, v) in &self.params {
            a.coeffs.insert(k.parse().expect("parameter names are identifiers"), *v);
        }
        a.to_string()
    }
}

/// Every command emits this envelope; sections it does not produce are
/// `null`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool_version: String,
    pub predictions: Option<Vec<PredictionEntry>>,
    pub ranking: Option<Ranking>,
    pub sweep: Option<CrossoverReport>,
    pub survey: Option<ModeComparison>,
}

impl Default for Report {
    fn default() -> Self {
        Report {
            tool_version: TOOL_VERSION.to_string(),
            predictions: None,
            ranking: None,
            sweep: None,
            survey: None,
        }
    }
}

impl Report {
    pub fn with_predictions(mut self, predictions: &[Prediction], bindings: &Bindings) -> Self {
        self.predictions = Some(predictions.iter().map(|p| PredictionEntry::new(p, bindings)).collect());
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("# Interaction mode evaluation\n");
        if let Some(p) = &self.predictions {
            markdown_predictions(&mut out, p);
        }
        if let Some(r) = &self.ranking {
            markdown_ranking(&mut out, r);
        }
        if let Some(s) = &self.sweep {
            markdown_sweep(&mut out, s);
        }
        if let Some(s) = &self.survey {
            markdown_survey(&mut out, s);
        }
        let _ = writeln!(out, "\n---\nGenerated by xreval {}.", self.tool_version);
        out
    }
}

/// Escapes `|` so free-text names do not break Markdown tables.
fn cell(s: &str) -> String {
    s.replace('|', "\\|")
}

fn bindings_text(b: &Bindings) -> String {
    if b.is_empty() {
        "none".to_string()
    } else {
        b.iter().map(|(k, v)| format!("{k} = {v} ms")).collect::<Vec<_>>().join(", ")
    }
}

fn markdown_predictions(out: &mut String, entries: &[PredictionEntry]) {
    let published = entries.iter().any(|e| e.published_total.is_some());
    out.push_str("\n## Predicted task times\n\n");
    out.push_str("| Mode | Operators | Predicted (ms) | Lower bound (ms) | Resolved (ms) |");
    out.push_str(if published { " Published (ms) |\n" } else { "\n" });
    out.push_str("|---|---:|---|---:|---:|");
    out.push_str(if published { "---|\n" } else { "\n" });
    for e in entries {
        let resolved = e.total_ms.map_or("unbound".to_string(), |t| t.to_string());
        let _ = write!(
            out,
            "| {} | {} | {} | {} | {} |",
            cell(&e.mode),
            e.operator_count,
            e.expression(),
            e.lower_bound_ms,
            resolved
        );
        if published {
            match &e.published_total {
                Some(t) => {
                    let _ = writeln!(out, " {t}[^published] |");
                }
                None => out.push_str(" |\n"),
            }
        } else {
            out.push('\n');
        }
    }

    for e in entries {
        let _ = writeln!(out, "\n### {}\n", e.mode);
        let repeat = if e.repeat > 1 {
            format!(", repeated {} times", e.repeat)
        } else {
            String::new()
        };
        let _ = writeln!(
            out,
            "Total: {} (lower bound {}){repeat}.\n",
            e.expression(),
            e.lower_bound_ms
        );
        out.push_str("| Operator | Category | Count | Unit | Subtotal (ms) |\n|---|---|---:|---|---|\n");
        for o in &e.per_operator {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} |",
                o.symbol, o.category, o.count, o.unit, o.subtotal
            );
        }
        out.push_str("\n| Category | Subtotal (ms) |\n|---|---|\n");
        for (c, a) in &e.per_category {
            let _ = writeln!(out, "| {c} | {a} |");
        }
    }
    if published {
        let _ = writeln!(out, "\n[^published]: {PUBLISHED_TOTALS_FOOTNOTE}");
    }
}

fn markdown_ranking(out: &mut String, r: &Ranking) {
    out.push_str("\n## Ranking\n\n");
    let _ = writeln!(out, "Bindings: {}.\n", bindings_text(&r.bindings));
    out.push_str("| Rank | Mode | Total (ms) |\n|---:|---|---:|\n");
    for (i, m) in r.ordered.iter().enumerate() {
        let _ = writeln!(out, "| {} | {} | {} |", i + 1, cell(&m.mode), m.total_ms);
    }
}

fn markdown_sweep(out: &mut String, s: &CrossoverReport) {
    let _ = writeln!(
        out,
        "\n## Sweep of {} from {} to {} ms (step {})\n",
        s.parameter, s.range.from, s.range.to, s.range.step
    );
    if s.crossovers.is_empty() {
        out.push_str("No crossovers within the swept range.\n");
    } else {
        out.push_str("| Mode A | Mode B | Crossover (ms) | Bracket |\n|---|---|---|---|\n");
        for c in &s.crossovers {
            let _ = writeln!(
                out,
                "| {} | {} | {} | [{}, {}] |",
                cell(&c.mode_a),
                cell(&c.mode_b),
                c.value,
                c.floor,
                c.ceil
            );
        }
    }
    if !s.out_of_range.is_empty() {
        out.push_str("\nCrossovers outside the range:\n\n");
        for c in &s.out_of_range {
            let _ = writeln!(out, "- {} / {}: {} = {}", c.mode_a, c.mode_b, s.parameter, c.value);
        }
    }
    let _ = write!(out, "\n| {} (ms) |", s.parameter);
    for m in &s.modes {
        let _ = write!(out, " {} |", cell(m));
    }
    out.push_str("\n|---:|");
    out.push_str(&"---:|".repeat(s.modes.len()));
    out.push('\n');
    for p in &s.points {
        let _ = write!(out, "| {} |", p.value);
        for t in &p.totals_ms {
            let _ = write!(out, " {t} |");
        }
        out.push('\n');
    }
}

fn fmt_opt(v: Option<f64>, digits: usize) -> String {
    v.map_or("n/a".to_string(), |x| format!("{x:.digits$}"))
}

fn method_text(t: &TestResult) -> &'static str {
    match t.method {
        Method::Exact => "exact",
        Method::Approximate => "approximate",
        Method::NotApplicable => "not applicable",
    }
}

fn markdown_survey(out: &mut String, s: &ModeComparison) {
    let _ = writeln!(out, "\n## Survey analysis: {}\n", s.measure);
    let _ = writeln!(out, "Complete participants: {}.\n", s.n);
    out.push_str("| Mode | n | Mean | Median | SD | Min | Max |\n|---|---:|---:|---:|---:|---:|---:|\n");
    for d in &s.descriptives {
        let _ = writeln!(
            out,
            "| {} | {} | {:.2} | {:.2} | {:.2} | {:.2} | {:.2} |",
            cell(&d.mode),
            d.n,
            d.mean,
            d.median,
            d.sd,
            d.min,
            d.max
        );
    }
    let f = &s.friedman;
    let _ = writeln!(
        out,
        "\nFriedman: chi-square = {}, df = {}, p = {} ({}).",
        fmt_opt(f.statistic, 4),
        s.modes.len() - 1,
        fmt_opt(f.p_value, 4),
        method_text(f)
    );
    if !f.notes.is_empty() {
        let _ = writeln!(out, "Notes: {}.", f.notes);
    }
    let pw = &s.pairwise;
    let _ = writeln!(
        out,
        "\n### Pairwise Wilcoxon signed-rank ({} correction, m = {}, alpha = {})\n",
        pw.correction, pw.comparisons, pw.alpha
    );
    if let Some(note) = &pw.note {
        let _ = writeln!(out, "Note: {note}.\n");
    }
    out.push_str("| Mode A | Mode B | n | W | p | p (adjusted) | Method | Significant |\n");
    out.push_str("|---|---|---:|---:|---:|---:|---|---|\n");
    for e in &pw.pairs {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} | {} |",
            cell(&e.mode_a),
            cell(&e.mode_b),
            e.test.n_effective,
            fmt_opt(e.test.statistic, 1),
            fmt_opt(e.test.p_value, 4),
            fmt_opt(e.p_adjusted, 4),
            method_text(&e.test),
            if e.significant { "yes" } else { "no" }
        );
    }
    if !s.warnings.is_empty() {
        out.push_str("\nWarnings:\n\n");
        for w in &s.warnings {
            let _ = writeln!(out, "- {w}");
        }
    }
}

fn csv_string(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn predictions_csv(entries: &[PredictionEntry]) -> String {
    let mut rows = vec![["mode", "operator_count", "expression", "constant_ms", "lower_bound_ms", "total_ms"]
        .map(String::from)
        .to_vec()];
    for e in entries {
        rows.push(vec![
            e.mode.clone(),
            e.operator_count.to_string(),
            e.expression(),
            e.constant_ms.to_string(),
            e.lower_bound_ms.to_string(),
            e.total_ms.map(|t| t.to_string()).unwrap_or_default(),
        ]);
    }
    csv_string(rows)
}

pub fn ranking_csv(r: &Ranking) -> String {
    let mut rows = vec![vec!["rank".to_string(), "mode".to_string(), "total_ms".to_string()]];
    for (i, m) in r.ordered.iter().enumerate() {
        rows.push(vec![(i + 1).to_string(), m.mode.clone(), m.total_ms.to_string()]);
    }
    csv_string(rows)
}

/// Per-step totals: the swept value, then one column per mode.
pub fn sweep_csv(s: &CrossoverReport) -> String {
    let mut header = vec![s.parameter.clone()];
    header.extend(s.modes.iter().cloned());
    let mut rows = vec![header];
    for p in &s.points {
        let mut row = vec![p.value.to_string()];
        row.extend(p.totals_ms.iter().map(u64::to_string));
        rows.push(row);
    }
    csv_string(rows)
}
