//! Survey analysis pipeline: scored responses → complete blocks →
//! descriptives, Friedman, pairwise Wilcoxon with Bonferroni.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::stats::{
    bonferroni_with_family, descriptives, friedman, wilcoxon_signed_rank, BlockMatrix, Descriptive, StatsError,
    TestResult,
};
use crate::survey::{ScoredResponse, Subscale};

pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Sus,
    TlxRaw,
    TlxWeighted,
    TlxSubscale(Subscale),
}

impl Measure {
    fn value(&self, r: &ScoredResponse) -> Option<f64> {
        match self {
            Measure::Sus => Some(r.sus_score.to_f64()),
            Measure::TlxRaw => Some(r.tlx_raw.to_f64()),
            Measure::TlxWeighted => r.tlx_weighted.map(|s| s.to_f64()),
            Measure::TlxSubscale(s) => Some(f64::from(r.tlx[s.index()])),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::Sus => f.write_str("sus"),
            Measure::TlxRaw => f.write_str("tlx_raw"),
            Measure::TlxWeighted => f.write_str("tlx_weighted"),
            Measure::TlxSubscale(s) => write!(f, "tlx:{s}"),
        }
    }
}

impl FromStr for Measure {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sus" => Ok(Measure::Sus),
            "tlx_raw" => Ok(Measure::TlxRaw),
            "tlx_weighted" => Ok(Measure::TlxWeighted),
            other => other
                .strip_prefix("tlx:")
                .and_then(Subscale::from_name)
                .map(Measure::TlxSubscale)
                .ok_or_else(|| {
                    format!(
                        "unknown measure `{other}` (expected sus, tlx_raw, tlx_weighted or tlx:<subscale> \
                         with subscale one of mental, physical, temporal, performance, effort, frustration)"
                    )
                }),
        }
    }
}

impl Serialize for Measure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseEntry {
    pub mode_a: String,
    pub mode_b: String,
    pub test: TestResult,
    /// `None` when the pairwise test is not applicable.
    pub p_adjusted: Option<f64>,
    pub significant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseReport {
    pub alpha: f64,
    pub correction: String,
    /// Family size m = k(k−1)/2.
    pub comparisons: usize,
    pub omnibus_significant: bool,
    pub note: Option<String>,
    pub pairs: Vec<PairwiseEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeComparison {
    pub measure: Measure,
    /// Complete blocks analysed.
    pub n: usize,
    pub modes: Vec<String>,
    pub descriptives: Vec<Descriptive>,
    pub friedman: TestResult,
    pub pairwise: PairwiseReport,
    pub warnings: Vec<String>,
}

/// Builds the complete-block matrix for `measure`. Modes and participants
/// keep first-appearance order. A participant without exactly one usable
/// value for every mode is dropped with a warning.
pub fn build_blocks(scores: &[ScoredResponse], measure: Measure) -> (Vec<String>, Vec<String>, Vec<Vec<f64>>, Vec<String>) {
    let mut modes: Vec<String> = Vec::new();
    let mut participants: Vec<String> = Vec::new();
    let mut cells: HashMap<(&str, &str), Vec<Option<f64>>> = HashMap::new();
    for r in scores {
        if !modes.contains(&r.mode) {
            modes.push(r.mode.clone());
        }
        if !participants.contains(&r.participant_id) {
            participants.push(r.participant_id.clone());
        }
        cells
            .entry((r.participant_id.as_str(), r.mode.as_str()))
            .or_default()
            .push(measure.value(r));
    }

    let mut kept = Vec::new();
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for p in &participants {
        let mut row = Vec::with_capacity(modes.len());
        let mut problem = None;
        for m in &modes {
            match cells.get(&(p.as_str(), m.as_str())).map(Vec::as_slice) {
                None | Some([]) => problem = Some(format!("no response for mode `{m}`")),
                Some([None]) => problem = Some(format!("no {measure} value for mode `{m}`")),
                Some([Some(v)]) => row.push(*v),
                Some(_) => problem = Some(format!("more than one response for mode `{m}`")),
            }
            if problem.is_some() {
                break;
            }
        }
        match problem {
            Some(why) => warnings.push(format!("participant `{p}` dropped: {why}")),
            None => {
                kept.push(p.clone());
                rows.push(row);
            }
        }
    }
    (kept, modes, rows, warnings)
}

/// Friedman omnibus plus all pairwise Wilcoxon tests (Bonferroni-adjusted).
/// The post-hoc section is always produced.
pub fn compare_modes(scores: &[ScoredResponse], measure: Measure, alpha: f64) -> Result<ModeComparison, StatsError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(StatsError::InvalidAlpha(alpha));
    }
    let (participants, modes, rows, warnings) = build_blocks(scores, measure);
    if modes.len() < 2 {
        return Err(StatsError::InsufficientData(format!(
            "need at least 2 modes, found {}",
            modes.len()
        )));
    }
    if participants.len() < 2 {
        return Err(StatsError::InsufficientData(format!(
            "need at least 2 complete participants, found {}",
            participants.len()
        )));
    }
    let matrix = BlockMatrix::new(participants, modes.clone(), rows)?;
    let desc = descriptives(&matrix);
    let omnibus = friedman(&matrix);
    let omnibus_significant = omnibus.p_value.is_some_and(|p| p < alpha);

    let k = matrix.k();
    let m = k * (k - 1) / 2;
    let mut pairs = Vec::with_capacity(m);
    for i in 0..k {
        for j in (i + 1)..k {
            let test = wilcoxon_signed_rank(&matrix.column(i), &matrix.column(j))?;
            let (p_adjusted, significant) = match test.p_value {
                Some(p) => {
                    let adj = bonferroni_with_family(&[p], m, alpha)?[0];
                    (Some(adj.p_adjusted), adj.significant)
                }
                None => (None, false),
            };
            pairs.push(PairwiseEntry {
                mode_a: modes[i].clone(),
                mode_b: modes[j].clone(),
                test,
                p_adjusted,
                significant,
            });
        }
    }

    let note = (!omnibus_significant).then(|| "omnibus not significant".to_string());
    Ok(ModeComparison {
        measure,
        n: matrix.n(),
        modes,
        descriptives: desc,
        friedman: omnibus,
        pairwise: PairwiseReport {
            alpha,
            correction: "bonferroni".to_string(),
            comparisons: m,
            omnibus_significant,
            note,
            pairs,
        },
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::Method;
    use crate::survey::{score_all, SurveyResponse};

    fn resp(pid: &str, mode: &str, sus: u8, tlx: u8) -> SurveyResponse {
        SurveyResponse {
            participant_id: pid.into(),
            mode: mode.into(),
            sus: [sus, 6 - sus, sus, 6 - sus, sus, 6 - sus, sus, 6 - sus, sus, 6 - sus],
            tlx: [tlx; 6],
            tlx_weights: None,
        }
    }

    #[test]
    fn measure_parsing() {
        assert_eq!("sus".parse::<Measure>(), Ok(Measure::Sus));
        assert_eq!(
            "tlx:physical".parse::<Measure>(),
            Ok(Measure::TlxSubscale(Subscale::Physical))
        );
        assert!("tlx:mood".parse::<Measure>().is_err());
        assert_eq!(Measure::TlxSubscale(Subscale::Effort).to_string(), "tlx:effort");
    }

    #[test]
    fn one_mode_uniformly_higher() {
        // Mode c scores 10 points above a and b for every participant; TLX
        // drives the numbers here.
        let mut rs = Vec::new();
        for (p, base) in [("p1", 20), ("p2", 40), ("p3", 60)] {
            rs.push(resp(p, "a", 3, base));
            rs.push(resp(p, "b", 3, base + 1));
            rs.push(resp(p, "c", 3, base + 10));
        }
        let scored = score_all(&rs).unwrap();
        let cmp = compare_modes(&scored, Measure::TlxRaw, 0.05).unwrap();
        assert_eq!(cmp.n, 3);
        let top = cmp
            .descriptives
            .iter()
            .max_by(|a, b| a.mean.total_cmp(&b.mean))
            .unwrap();
        assert_eq!(top.mode, "c");
        // Consistent ordering a < b < c: χ² = 6, exact p = 6/216.
        assert_eq!(cmp.friedman.statistic, Some(6.0));
        assert_eq!(cmp.friedman.p_value, Some(6.0 / 216.0));
        assert!(cmp.pairwise.omnibus_significant);
        // Each pair: n = 3, all same sign → exact p = 2/8, adjusted ×3.
        for e in &cmp.pairwise.pairs {
            assert_eq!(e.test.p_value, Some(0.25));
            assert_eq!(e.p_adjusted, Some(0.75));
            assert!(!e.significant);
        }
    }

    #[test]
    fn identical_scores_not_applicable() {
        let rs: Vec<_> = ["p1", "p2", "p3"]
            .iter()
            .flat_map(|p| ["a", "b", "c"].map(|m| resp(p, m, 3, 50)))
            .collect();
        let cmp = compare_modes(&score_all(&rs).unwrap(), Measure::Sus, 0.05).unwrap();
        assert_eq!(cmp.friedman.method, Method::NotApplicable);
        assert!(cmp.pairwise.pairs.iter().all(|e| e.test.method == Method::NotApplicable));
        assert!(cmp.pairwise.pairs.iter().all(|e| e.p_adjusted.is_none() && !e.significant));
        assert_eq!(cmp.pairwise.note.as_deref(), Some("omnibus not significant"));
    }

    #[test]
    fn incomplete_participant_dropped() {
        let mut rs = Vec::new();
        for p in ["p1", "p2", "p3"] {
            for (m, s) in [("a", 2), ("b", 3), ("c", 4)] {
                rs.push(resp(p, m, s, 50));
            }
        }
        rs.push(resp("p4", "a", 3, 50));
        rs.push(resp("p4", "b", 3, 50));
        let cmp = compare_modes(&score_all(&rs).unwrap(), Measure::Sus, 0.05).unwrap();
        assert_eq!(cmp.n, 3);
        assert_eq!(cmp.warnings.len(), 1);
        assert!(cmp.warnings[0].contains("p4") && cmp.warnings[0].contains("`c`"));
    }

    #[test]
    fn weighted_measure_requires_weights() {
        let rs: Vec<_> = ["p1", "p2"]
            .iter()
            .flat_map(|p| ["a", "b"].map(|m| resp(p, m, 3, 50)))
            .collect();
        let err = compare_modes(&score_all(&rs).unwrap(), Measure::TlxWeighted, 0.05).unwrap_err();
        assert!(matches!(err, StatsError::InsufficientData(_)));
    }

    #[test]
    fn insufficient_data() {
        let rs = vec![resp("p1", "a", 3, 50), resp("p1", "b", 4, 50)];
        assert!(matches!(
            compare_modes(&score_all(&rs).unwrap(), Measure::Sus, 0.05),
            Err(StatsError::InsufficientData(_))
        ));
        assert!(compare_modes(&[], Measure::Sus, 0.05).is_err());
        assert!(matches!(compare_modes(&[], Measure::Sus, 1.5), Err(StatsError::InvalidAlpha(_))));
    }
}
