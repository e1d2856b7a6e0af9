//! Nonparametric statistics for within-subject comparisons of k modes.

mod friedman;
pub mod special;
mod wilcoxon;

use serde::Serialize;
use thiserror::Error;

pub use friedman::{friedman, FRIEDMAN_EXACT_MAX_K, FRIEDMAN_EXACT_MAX_N};
pub use wilcoxon::{wilcoxon_signed_rank, wilcoxon_signed_rank_with, WilcoxonPath, WILCOXON_EXACT_MAX_N};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("invalid block matrix: {0}")]
    InvalidMatrix(String),
    #[error("samples differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("at least one paired observation is required")]
    Empty,
    #[error("p-value {0} is outside [0, 1]")]
    InvalidPValue(f64),
    #[error("alpha {0} is outside (0, 1)")]
    InvalidAlpha(f64),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

/// Values closer than this (relative) are treated as tied.
const TIE_EPS: f64 = 1e-9;

fn tied(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_EPS * 1f64.max(a.abs()).max(b.abs())
}

/// Ascending mid-ranks, doubled so they stay integral, plus the sizes of
/// every tie group (including singletons).
pub(crate) fn doubled_midranks(values: &[f64]) -> (Vec<u64>, Vec<u64>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0u64; values.len()];
    let mut groups = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && tied(values[order[end - 1]], values[order[end]]) {
            end += 1;
        }
        // positions start+1 ..= end share rank (start+1+end)/2
        let doubled = (start + 1 + end) as u64;
        for &i in &order[start..end] {
            ranks[i] = doubled;
        }
        groups.push((end - start) as u64);
        start = end;
    }
    (ranks, groups)
}

/// Σ (t³ − t) over tie groups.
pub(crate) fn tie_term(groups: &[u64]) -> u64 {
    groups.iter().map(|&t| t * t * t - t).sum()
}

/// n participants (rows) × k modes (columns), complete.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockMatrix {
    participants: Vec<String>,
    modes: Vec<String>,
    values: Vec<Vec<f64>>,
}

impl BlockMatrix {
    pub fn new(participants: Vec<String>, modes: Vec<String>, values: Vec<Vec<f64>>) -> Result<Self, StatsError> {
        let (n, k) = (participants.len(), modes.len());
        if n < 2 {
            return Err(StatsError::InvalidMatrix(format!("need at least 2 participants, got {n}")));
        }
        if k < 2 {
            return Err(StatsError::InvalidMatrix(format!("need at least 2 modes, got {k}")));
        }
        if values.len() != n {
            return Err(StatsError::InvalidMatrix(format!("{} rows for {n} participants", values.len())));
        }
        for (i, row) in values.iter().enumerate() {
            if row.len() != k {
                return Err(StatsError::InvalidMatrix(format!(
                    "row {} has {} values, expected {k}",
                    i + 1,
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(StatsError::InvalidMatrix(format!("row {} has a non-finite value", i + 1)));
            }
        }
        Ok(BlockMatrix {
            participants,
            modes,
            values,
        })
    }

    /// Matrix with generated row labels, handy for tests.
    pub fn from_rows(modes: &[&str], values: Vec<Vec<f64>>) -> Result<Self, StatsError> {
        let participants = (1..=values.len()).map(|i| format!("p{i}")).collect();
        Self::new(participants, modes.iter().map(|m| m.to_string()).collect(), values)
    }

    pub fn n(&self) -> usize {
        self.participants.len()
    }

    pub fn k(&self) -> usize {
        self.modes.len()
    }

    pub fn participants(&self) -> &[String] {
        &self.participants
    }

    pub fn modes(&self) -> &[String] {
        &self.modes
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.iter().map(|r| r[j]).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Full enumeration of the null distribution.
    Exact,
    Approximate,
    /// Statistic undefined (e.g. every observation tied).
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    pub test: String,
    /// `None` when not applicable.
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    pub method: Method,
    pub n_effective: usize,
    pub notes: String,
}

impl TestResult {
    pub(crate) fn not_applicable(test: &str, n_effective: usize, reason: &str) -> Self {
        TestResult {
            test: test.to_string(),
            statistic: None,
            p_value: None,
            method: Method::NotApplicable,
            n_effective,
            notes: reason.to_string(),
        }
    }

    pub fn is_applicable(&self) -> bool {
        self.method != Method::NotApplicable
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Descriptive {
    pub mode: String,
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (n − 1 denominator).
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

pub fn describe(mode: &str, values: &[f64]) -> Descriptive {
    let n = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = sorted.iter().sum::<f64>() / n as f64;
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    let sd = if n > 1 {
        (sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    Descriptive {
        mode: mode.to_string(),
        n,
        mean,
        median,
        sd,
        min: sorted[0],
        max: sorted[n - 1],
    }
}

/// Per-mode summary, in column order.
pub fn descriptives(matrix: &BlockMatrix) -> Vec<Descriptive> {
    (0..matrix.k())
        .map(|j| describe(&matrix.modes()[j], &matrix.column(j)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdjustedP {
    pub p_value: f64,
    pub p_adjusted: f64,
    pub significant: bool,
}

/// Bonferroni: `p_adj = min(1, m·p)` with `m = p_values.len()`; significant
/// iff `p_adj < alpha`.
pub fn bonferroni(p_values: &[f64], alpha: f64) -> Result<Vec<AdjustedP>, StatsError> {
    bonferroni_with_family(p_values, p_values.len(), alpha)
}

/// Bonferroni with an explicit family size `m`.
pub fn bonferroni_with_family(p_values: &[f64], m: usize, alpha: f64) -> Result<Vec<AdjustedP>, StatsError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(StatsError::InvalidAlpha(alpha));
    }
    p_values
        .iter()
        .map(|&p| {
            if !(0.0..=1.0).contains(&p) {
                return Err(StatsError::InvalidPValue(p));
            }
            let p_adjusted = (m as f64 * p).min(1.0);
            Ok(AdjustedP {
                p_value: p,
                p_adjusted,
                significant: p_adjusted < alpha,
            })
        })
        .collect()
}
