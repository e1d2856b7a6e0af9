//! Wilcoxon signed-rank test for paired samples.

use super::special::normal_sf;
use super::{doubled_midranks, tie_term, tied, Method, StatsError, TestResult};

/// Exact enumeration is used up to this many nonzero differences.
pub const WILCOXON_EXACT_MAX_N: usize = 20;

/// Largest n for which the exact distribution can be forced.
const EXACT_LIMIT: usize = 100;

const NAME: &str = "wilcoxon_signed_rank";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WilcoxonPath {
    /// Exact for `n_effective <= WILCOXON_EXACT_MAX_N`, else approximate.
    Auto,
    Exact,
    Approximate,
}

/// Two-sided test of `x − y` with [`WilcoxonPath::Auto`].
pub fn wilcoxon_signed_rank(x: &[f64], y: &[f64]) -> Result<TestResult, StatsError> {
    wilcoxon_signed_rank_with(x, y, WilcoxonPath::Auto)
}

/// Zero differences are dropped, |d| gets mid-ranks and `W = min(W+, W−)`.
///
/// Exact: `p = 2 · P(W+ ≤ W)` under independent fair signs, clamped to 1.
/// Approximate: normal with continuity correction and tie-corrected
/// variance.
pub fn wilcoxon_signed_rank_with(x: &[f64], y: &[f64], path: WilcoxonPath) -> Result<TestResult, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.is_empty() {
        return Err(StatsError::Empty);
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(StatsError::InvalidMatrix("non-finite value in sample".into()));
    }
    let d: Vec<f64> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| !tied(**a, **b))
        .map(|(a, b)| a - b)
        .collect();
    let n = d.len();
    let zeros = x.len() - n;
    if n == 0 {
        return Ok(TestResult::not_applicable(NAME, 0, "all differences are zero"));
    }

    let abs: Vec<f64> = d.iter().map(|v| v.abs()).collect();
    let (ranks, groups) = doubled_midranks(&abs);
    let w_plus2: u64 = d.iter().zip(&ranks).filter(|(v, _)| **v > 0.0).map(|(_, r)| r).sum();
    let total2 = (n * (n + 1)) as u64;
    let w2 = w_plus2.min(total2 - w_plus2);
    let statistic = w2 as f64 / 2.0;
    let ties = tie_term(&groups);

    let exact = match path {
        WilcoxonPath::Auto => n <= WILCOXON_EXACT_MAX_N,
        WilcoxonPath::Exact => n <= EXACT_LIMIT,
        WilcoxonPath::Approximate => false,
    };

    let mut notes = Vec::new();
    if zeros > 0 {
        notes.push(format!("{zeros} zero difference(s) discarded"));
    }
    if ties > 0 {
        notes.push("mid-ranks for tied |d|".to_string());
    }

    let (p, method) = if exact {
        (exact_p(&ranks, w2), Method::Exact)
    } else {
        let nf = n as f64;
        let mean = nf * (nf + 1.0) / 4.0;
        let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - ties as f64 / 48.0;
        let z = ((statistic - mean).abs() - 0.5) / var.sqrt();
        notes.push("normal approximation with continuity correction".to_string());
        ((2.0 * normal_sf(z)).min(1.0), Method::Approximate)
    };

    Ok(TestResult {
        test: NAME.to_string(),
        statistic: Some(statistic),
        p_value: Some(p),
        method,
        n_effective: n,
        notes: notes.join("; "),
    })
}

/// Null distribution of W+ (in doubled-rank units) by subset-sum counting
/// over the 2^n sign assignments.
fn exact_p(doubled_ranks: &[u64], w2: u64) -> f64 {
    let max: u64 = doubled_ranks.iter().sum();
    let mut counts = vec![0u128; max as usize + 1];
    counts[0] = 1;
    let mut reach = 0usize;
    for &r in doubled_ranks {
        let r = r as usize;
        for s in (0..=reach).rev() {
            let c = counts[s];
            if c > 0 {
                counts[s + r] += c;
            }
        }
        reach += r;
    }
    let at_most: u128 = counts[..=w2 as usize].iter().sum();
    let p = (2 * at_most) as f64 / 2f64.powi(doubled_ranks.len() as i32);
    p.min(1.0)
}
