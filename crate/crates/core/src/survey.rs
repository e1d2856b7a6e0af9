//! SUS and NASA-TLX scoring, plus the CSV ingestion that feeds it.
//!
//! Scores are exact rationals ([`Score`]) and are only rounded when
//! rendered (two decimals, half-up).

use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};
use thiserror::Error;

pub const SUS_ITEMS: usize = 10;
pub const TLX_ITEMS: usize = 6;
/// Number of pairwise comparisons among the six TLX subscales.
pub const TLX_WEIGHT_TOTAL: u32 = 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurveyError {
    #[error("expected {expected} {instrument} items, found {found}")]
    WrongItemCount {
        instrument: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{item} out of range [{min},{max}] (got {value})")]
    ItemOutOfRange {
        item: String,
        value: i64,
        min: i64,
        max: i64,
    },
    #[error("TLX weights sum to {0}, expected 15")]
    WeightsDontSumTo15(u32),
    #[error("malformed CSV: {0}")]
    MalformedCsv(String),
    #[error("participant `{participant}`, mode `{mode}`: {source}")]
    InResponse {
        participant: String,
        mode: String,
        #[source]
        source: Box<SurveyError>,
    },
}

/// Non-negative exact score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Score(Ratio<i64>);

impl Score {
    pub fn new(numer: i64, denom: i64) -> Self {
        Score(Ratio::new(numer, denom))
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }

    /// Value in hundredths, rounded half-up.
    pub fn hundredths(&self) -> i64 {
        let (n, d) = (*self.0.numer(), *self.0.denom());
        (n * 200 + d).div_euclid(2 * d)
    }

    /// Two-decimal value as `f64` (what JSON output carries).
    pub fn rounded(&self) -> f64 {
        self.hundredths() as f64 / 100.0
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = self.hundredths();
        write!(f, "{}.{:02}", h / 100, h % 100)
    }
}

impl Serialize for Score {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.rounded())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Subscale {
    Mental,
    Physical,
    Temporal,
    Performance,
    Effort,
    Frustration,
}

impl Subscale {
    pub const ALL: [Subscale; TLX_ITEMS] = [
        Subscale::Mental,
        Subscale::Physical,
        Subscale::Temporal,
        Subscale::Performance,
        Subscale::Effort,
        Subscale::Frustration,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subscale::Mental => "mental",
            Subscale::Physical => "physical",
            Subscale::Temporal => "temporal",
            Subscale::Performance => "performance",
            Subscale::Effort => "effort",
            Subscale::Frustration => "frustration",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Subscale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One participant's answers for one mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyResponse {
    pub participant_id: String,
    pub mode: String,
    pub sus: [u8; SUS_ITEMS],
    /// Ratings in [`Subscale::ALL`] order.
    pub tlx: [u8; TLX_ITEMS],
    pub tlx_weights: Option<[u8; TLX_ITEMS]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScoredResponse {
    pub participant_id: String,
    pub mode: String,
    pub sus_score: Score,
    pub tlx_raw: Score,
    pub tlx_weighted: Option<Score>,
    /// Subscale ratings carried through for per-subscale analysis.
    #[serde(skip)]
    pub tlx: [u8; TLX_ITEMS],
}

fn check_range(item: impl Fn(usize) -> String, values: &[u8], min: u8, max: u8) -> Result<(), SurveyError> {
    for (i, &v) in values.iter().enumerate() {
        if v < min || v > max {
            return Err(SurveyError::ItemOutOfRange {
                item: item(i),
                value: i64::from(v),
                min: i64::from(min),
                max: i64::from(max),
            });
        }
    }
    Ok(())
}

fn check_count(instrument: &'static str, expected: usize, found: usize) -> Result<(), SurveyError> {
    if expected == found {
        Ok(())
    } else {
        Err(SurveyError::WrongItemCount {
            instrument,
            expected,
            found,
        })
    }
}

/// Standard SUS: odd (positively worded) items contribute `item - 1`, even
/// items `5 - item`; the sum is scaled by 2.5 onto 0..=100.
pub fn score_sus(items: &[u8]) -> Result<Score, SurveyError> {
    check_count("SUS", SUS_ITEMS, items.len())?;
    check_range(|i| format!("sus_{}", i + 1), items, 1, 5)?;
    let sum: i64 = items
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let v = i64::from(v);
            if i % 2 == 0 {
                v - 1
            } else {
                5 - v
            }
        })
        .sum();
    Ok(Score::new(sum * 5, 2))
}

fn tlx_item(i: usize) -> String {
    format!("tlx_{}", Subscale::ALL[i].name())
}

/// Raw TLX: unweighted mean of the six subscale ratings.
pub fn score_tlx_raw(ratings: &[u8]) -> Result<Score, SurveyError> {
    check_count("TLX", TLX_ITEMS, ratings.len())?;
    check_range(tlx_item, ratings, 0, 100)?;
    let sum: i64 = ratings.iter().map(|&r| i64::from(r)).sum();
    Ok(Score::new(sum, TLX_ITEMS as i64))
}

/// Weighted TLX: `Σ weight_i · rating_i / 15`.
pub fn score_tlx_weighted(ratings: &[u8], weights: &[u8]) -> Result<Score, SurveyError> {
    check_count("TLX", TLX_ITEMS, ratings.len())?;
    check_count("TLX weight", TLX_ITEMS, weights.len())?;
    check_range(tlx_item, ratings, 0, 100)?;
    check_range(|i| format!("tlxw_{}", Subscale::ALL[i].name()), weights, 0, 5)?;
    let total: u32 = weights.iter().map(|&w| u32::from(w)).sum();
    if total != TLX_WEIGHT_TOTAL {
        return Err(SurveyError::WeightsDontSumTo15(total));
    }
    let sum: i64 = ratings
        .iter()
        .zip(weights)
        .map(|(&r, &w)| i64::from(r) * i64::from(w))
        .sum();
    Ok(Score::new(sum, i64::from(TLX_WEIGHT_TOTAL)))
}

pub fn score_response(r: &SurveyResponse) -> Result<ScoredResponse, SurveyError> {
    let scored = (|| {
        Ok(ScoredResponse {
            participant_id: r.participant_id.clone(),
            mode: r.mode.clone(),
            sus_score: score_sus(&r.sus)?,
            tlx_raw: score_tlx_raw(&r.tlx)?,
            tlx_weighted: r
                .tlx_weights
                .as_ref()
                .map(|w| score_tlx_weighted(&r.tlx, w))
                .transpose()?,
            tlx: r.tlx,
        })
    })();
    scored.map_err(|e| SurveyError::InResponse {
        participant: r.participant_id.clone(),
        mode: r.mode.clone(),
        source: Box::new(e),
    })
}

/// Scores every response, preserving input order.
pub fn score_all(responses: &[SurveyResponse]) -> Result<Vec<ScoredResponse>, SurveyError> {
    responses.iter().map(score_response).collect()
}

/// A validation problem with one CSV row. The row is excluded from the
/// ingested responses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowDiagnostic {
    /// 1-based line number in the file (the header is line 1).
    pub row: u64,
    pub column: String,
    pub message: String,
}

impl fmt::Display for RowDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at row {}", self.message, self.row)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ingested {
    pub responses: Vec<SurveyResponse>,
    pub diagnostics: Vec<RowDiagnostic>,
}

pub fn sus_columns() -> impl Iterator<Item = String> {
    (1..=SUS_ITEMS).map(|i| format!("sus_{i}"))
}

pub fn tlx_columns() -> impl Iterator<Item = String> {
    Subscale::ALL.into_iter().map(|s| format!("tlx_{s}"))
}

pub fn tlx_weight_columns() -> impl Iterator<Item = String> {
    Subscale::ALL.into_iter().map(|s| format!("tlxw_{s}"))
}

/// Header for the response CSV, with or without the weight columns.
pub fn response_header(with_weights: bool) -> Vec<String> {
    let mut cols = vec!["participant_id".to_string(), "mode".to_string()];
    cols.extend(sus_columns());
    cols.extend(tlx_columns());
    if with_weights {
        cols.extend(tlx_weight_columns());
    }
    cols
}

struct Layout {
    participant: usize,
    mode: usize,
    sus: Vec<usize>,
    tlx: Vec<usize>,
    weights: Option<Vec<usize>>,
}

fn layout(headers: &csv::StringRecord) -> Result<Layout, SurveyError> {
    let mut index = HashMap::new();
    for (i, h) in headers.iter().enumerate() {
        if index.insert(h.to_string(), i).is_some() {
            return Err(SurveyError::MalformedCsv(format!("duplicate column `{h}`")));
        }
    }
    let known: Vec<String> = response_header(true);
    if let Some(h) = headers.iter().find(|h| !known.iter().any(|k| k == h)) {
        return Err(SurveyError::MalformedCsv(format!("unknown column `{h}`")));
    }
    let require = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| SurveyError::MalformedCsv(format!("missing column `{name}`")))
    };
    let many = |names: Vec<String>| names.iter().map(|n| require(n)).collect::<Result<Vec<_>, _>>();
    let weight_names: Vec<String> = tlx_weight_columns().collect();
    let present = weight_names.iter().filter(|n| index.contains_key(*n)).count();
    let weights = match present {
        0 => None,
        TLX_ITEMS => Some(many(weight_names)?),
        _ => {
            return Err(SurveyError::MalformedCsv(
                "TLX weight columns must be all present or all absent".into(),
            ))
        }
    };
    Ok(Layout {
        participant: require("participant_id")?,
        mode: require("mode")?,
        sus: many(sus_columns().collect())?,
        tlx: many(tlx_columns().collect())?,
        weights,
    })
}

fn parse_items(
    record: &csv::StringRecord,
    headers: &csv::StringRecord,
    cols: &[usize],
    min: i64,
    max: i64,
) -> Result<Vec<u8>, (String, String)> {
    cols.iter()
        .map(|&c| {
            let name = headers[c].to_string();
            let raw = record.get(c).unwrap_or("");
            let v: i64 = raw
                .parse()
                .map_err(|_| (name.clone(), format!("{name} is not an integer (got `{raw}`)")))?;
            if v < min || v > max {
                return Err((name.clone(), format!("{name} out of range [{min},{max}] (got {v})")));
            }
            Ok(v as u8)
        })
        .collect()
}

fn parse_row(
    record: &csv::StringRecord,
    headers: &csv::StringRecord,
    layout: &Layout,
) -> Result<SurveyResponse, (String, String)> {
    if record.len() != headers.len() {
        return Err((
            "*".into(),
            format!("expected {} fields, found {}", headers.len(), record.len()),
        ));
    }
    let participant_id = record[layout.participant].to_string();
    if participant_id.is_empty() {
        return Err(("participant_id".into(), "participant_id is empty".into()));
    }
    let mode = record[layout.mode].to_string();
    if mode.is_empty() {
        return Err(("mode".into(), "mode is empty".into()));
    }
    let sus = parse_items(record, headers, &layout.sus, 1, 5)?;
    let tlx = parse_items(record, headers, &layout.tlx, 0, 100)?;
    let tlx_weights = match &layout.weights {
        Some(cols) if cols.iter().all(|&c| record[c].is_empty()) => None,
        Some(cols) => {
            let w = parse_items(record, headers, cols, 0, 5)?;
            let total: u32 = w.iter().map(|&x| u32::from(x)).sum();
            if total != TLX_WEIGHT_TOTAL {
                return Err(("tlxw_*".into(), format!("TLX weights sum to {total}, expected 15")));
            }
            Some(w.try_into().expect("six weight columns"))
        }
        None => None,
    };
    Ok(SurveyResponse {
        participant_id,
        mode,
        sus: sus.try_into().expect("ten SUS columns"),
        tlx: tlx.try_into().expect("six TLX columns"),
        tlx_weights,
    })
}

/// Reads the response CSV. Structural problems (bad header, unreadable
/// CSV) fail the whole file; a row that fails validation is reported in
/// [`Ingested::diagnostics`] and skipped.
pub fn ingest_csv(source: &str) -> Result<Ingested, SurveyError> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| SurveyError::MalformedCsv(e.to_string()))?
        .clone();
    if headers.is_empty() {
        return Err(SurveyError::MalformedCsv("missing header row".into()));
    }
    let layout = layout(&headers)?;
    let mut out = Ingested::default();
    for record in reader.records() {
        let record = record.map_err(|e| SurveyError::MalformedCsv(e.to_string()))?;
        let row = record.position().map_or(0, |p| p.line());
        match parse_row(&record, &headers, &layout) {
            Ok(r) => out.responses.push(r),
            Err((column, message)) => out.diagnostics.push(RowDiagnostic { row, column, message }),
        }
    }
    Ok(out)
}

/// Writes responses in the input CSV schema. Weight columns are emitted
/// when any response has weights.
pub fn write_responses_csv(responses: &[SurveyResponse]) -> String {
    let with_weights = responses.iter().any(|r| r.tlx_weights.is_some());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(response_header(with_weights)).expect("in-memory write");
    for r in responses {
        let mut row = vec![r.participant_id.clone(), r.mode.clone()];
        row.extend(r.sus.iter().map(u8::to_string));
        row.extend(r.tlx.iter().map(u8::to_string));
        if with_weights {
            match &r.tlx_weights {
                Some(ws) => row.extend(ws.iter().map(u8::to_string)),
                None => row.extend(std::iter::repeat_n(String::new(), TLX_ITEMS)),
            }
        }
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Scored output: `participant_id,mode,sus_score,tlx_raw[,tlx_weighted]`.
pub fn write_scored_csv(scored: &[ScoredResponse]) -> String {
    let with_weights = scored.iter().any(|s| s.tlx_weighted.is_some());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["participant_id", "mode", "sus_score", "tlx_raw"];
    if with_weights {
        header.push("tlx_weighted");
    }
    w.write_record(&header).expect("in-memory write");
    for s in scored {
        let mut row = vec![
            s.participant_id.clone(),
            s.mode.clone(),
            s.sus_score.to_string(),
            s.tlx_raw.to_string(),
        ];
        if with_weights {
            row.push(s.tlx_weighted.map(|x| x.to_string()).unwrap_or_default());
        }
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}
