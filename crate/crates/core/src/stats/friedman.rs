//! Friedman omnibus test over within-row ranks.

use super::special::chi_square_sf;
use super::{doubled_midranks, tie_term, BlockMatrix, Method, TestResult};

/// Exact enumeration is used when `n <= FRIEDMAN_EXACT_MAX_N` and
/// `k <= FRIEDMAN_EXACT_MAX_K`.
pub const FRIEDMAN_EXACT_MAX_N: usize = 6;
pub const FRIEDMAN_EXACT_MAX_K: usize = 3;

const NAME: &str = "friedman";

/// All permutations of `items` (with multiplicity when items repeat).
fn permutations(items: &[u64]) -> Vec<Vec<u64>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Counts rank configurations whose Σ R_j² (doubled ranks) reaches
/// `observed`, permuting each row independently.
fn count_at_least(rows: &[Vec<Vec<u64>>], sums: &mut [u64], observed: u64) -> u64 {
    match rows.split_first() {
        None => {
            let ss: u64 = sums.iter().map(|s| s * s).sum();
            u64::from(ss >= observed)
        }
        Some((perms, rest)) => {
            let mut count = 0;
            for p in perms {
                for (s, r) in sums.iter_mut().zip(p) {
                    *s += r;
                }
                count += count_at_least(rest, sums, observed);
                for (s, r) in sums.iter_mut().zip(p) {
                    *s -= r;
                }
            }
            count
        }
    }
}

/// Friedman χ² with the tie-corrected denominator.
///
/// With doubled ranks `2R_j` the statistic is exactly
/// `3(k−1)(Σ(2R_j)² − n²k(k+1)²) / (nk(k−1)(k+1) − Σ(t³−t))`, evaluated in
/// integers and divided once. Within-row permutations keep the tie
/// structure, so the exact p-value only has to compare Σ(2R_j)².
pub fn friedman(matrix: &BlockMatrix) -> TestResult {
    let (n, k) = (matrix.n(), matrix.k());
    let mut doubled = Vec::with_capacity(n);
    let mut ties = 0u64;
    let mut fully_tied_rows = 0;
    for row in matrix.rows() {
        let (ranks, groups) = doubled_midranks(row);
        if groups.len() == 1 {
            fully_tied_rows += 1;
        }
        ties += tie_term(&groups);
        doubled.push(ranks);
    }
    if fully_tied_rows == n {
        return TestResult::not_applicable(NAME, n, "every row is entirely tied; statistic undefined");
    }

    let mut sums = vec![0u64; k];
    for ranks in &doubled {
        for (s, r) in sums.iter_mut().zip(ranks) {
            *s += r;
        }
    }
    let ss: u64 = sums.iter().map(|s| s * s).sum();
    let (n128, k128) = (n as i128, k as i128);
    let numer = 3 * (k128 - 1) * (ss as i128 - n128 * n128 * k128 * (k128 + 1) * (k128 + 1));
    let denom = n128 * k128 * (k128 - 1) * (k128 + 1) - ties as i128;
    let statistic = numer as f64 / denom as f64;

    let mut notes = Vec::new();
    if ties > 0 {
        notes.push("mid-ranks with tie correction".to_string());
    }
    if fully_tied_rows > 0 {
        notes.push(format!("{fully_tied_rows} fully tied row(s)"));
    }

    let (p_value, method) = if n <= FRIEDMAN_EXACT_MAX_N && k <= FRIEDMAN_EXACT_MAX_K {
        let perms: Vec<_> = doubled.iter().map(|r| permutations(r)).collect();
        let total: u64 = perms.iter().map(|p| p.len() as u64).product();
        let hits = count_at_least(&perms, &mut vec![0; k], ss);
        (hits as f64 / total as f64, Method::Exact)
    } else {
        (chi_square_sf(statistic, (k - 1) as f64), Method::Approximate)
    };

    TestResult {
        test: NAME.to_string(),
        statistic: Some(statistic),
        p_value: Some(p_value),
        method,
        n_effective: n,
        notes: notes.join("; "),
    }
}
