//! Brute-force oracles shared by the integration and acceptance tests.
//! Nothing here calls into the code paths it checks.

#![allow(dead_code)]

use std::collections::BTreeMap;

/// Naive mid-rank: (#smaller) + (#equal + 1) / 2.
pub fn naive_ranks(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .map(|&v| {
            let less = values.iter().filter(|&&u| u < v).count() as f64;
            let equal = values.iter().filter(|&&u| u == v).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

/// Two-sided exact Wilcoxon signed-rank by listing all 2^n sign vectors.
/// Returns `(W, p)` or `None` when every difference is zero.
pub fn wilcoxon_enumeration(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).filter(|v| *v != 0.0).collect();
    let n = d.len();
    if n == 0 {
        return None;
    }
    let abs: Vec<f64> = d.iter().map(|v| v.abs()).collect();
    let ranks = naive_ranks(&abs);
    let w_plus: f64 = d.iter().zip(&ranks).filter(|(v, _)| **v > 0.0).map(|(_, r)| r).sum();
    let total = (n * (n + 1)) as f64 / 2.0;
    let w = w_plus.min(total - w_plus);
    let mut at_most = 0u64;
    for mask in 0u64..(1u64 << n) {
        let s: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
        if s <= w + 1e-9 {
            at_most += 1;
        }
    }
    let p = (2.0 * at_most as f64 / (1u64 << n) as f64).min(1.0);
    Some((w, p))
}

fn friedman_statistic(rank_rows: &[Vec<f64>]) -> f64 {
    let n = rank_rows.len() as f64;
    let k = rank_rows[0].len();
    let kf = k as f64;
    let sums: Vec<f64> = (0..k).map(|j| rank_rows.iter().map(|r| r[j]).sum()).collect();
    let ss: f64 = sums.iter().map(|s| s * s).sum();
    let uncorrected = 12.0 / (n * kf * (kf + 1.0)) * ss - 3.0 * n * (kf + 1.0);
    let mut ties = 0.0;
    for r in rank_rows {
        let mut counts: BTreeMap<i64, f64> = BTreeMap::new();
        for v in r {
            *counts.entry((v * 2.0) as i64).or_default() += 1.0;
        }
        ties += counts.values().map(|t| t * t * t - t).sum::<f64>();
    }
    uncorrected / (1.0 - ties / (n * (kf * kf * kf - kf)))
}

fn index_permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in index_permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Friedman statistic and exact p by applying every one of the (k!)^n
/// within-row permutations. `None` when every row is fully tied.
pub fn friedman_enumeration(rows: &[Vec<f64>]) -> Option<(f64, f64)> {
    let rank_rows: Vec<Vec<f64>> = rows.iter().map(|r| naive_ranks(r)).collect();
    if rank_rows.iter().all(|r| r.iter().all(|&v| v == r[0])) {
        return None;
    }
    let observed = friedman_statistic(&rank_rows);
    let k = rows[0].len();
    let perms = index_permutations(k);
    let n = rows.len();
    let total = perms.len().pow(n as u32);
    let mut hits = 0u64;
    let mut current = rank_rows.clone();
    for code in 0..total {
        let mut c = code;
        for (i, row) in current.iter_mut().enumerate() {
            let p = &perms[c % perms.len()];
            c /= perms.len();
            for j in 0..k {
                row[j] = rank_rows[i][p[j]];
            }
        }
        if friedman_statistic(&current) >= observed - 1e-9 {
            hits += 1;
        }
    }
    Some((observed, hits as f64 / total as f64))
}

/// Operator table for the expansion oracle: symbol → (fixed ms, param).
pub type OracleTable = BTreeMap<String, (u64, Option<String>)>;

/// Expands every `count × symbol` into `count` unit entries and adds them
/// one at a time.
pub fn expansion_total(terms: &[(u32, String)], table: &OracleTable, repeat: u32) -> (u64, BTreeMap<String, u64>) {
    let mut constant = 0u64;
    let mut coeffs = BTreeMap::new();
    for _ in 0..repeat {
        for (count, sym) in terms {
            for _ in 0..*count {
                match &table[sym] {
                    (_, Some(p)) => *coeffs.entry(p.clone()).or_insert(0) += 1,
                    (ms, None) => constant += ms,
                }
            }
        }
    }
    (constant, coeffs)
}
