//! Agreement between community assignments, and a label propagation
//! baseline detector.

mod contingency;
mod lpa;

use crate::error::{Error, Result};
use crate::graph::{Cover, Partition};

pub use contingency::ContingencyTable;
pub use lpa::{lpa_detect, DetectionResult, DEFAULT_MAX_SWEEPS};

fn comb2(x: u64) -> u128 {
    let x = x as u128;
    x * x.saturating_sub(1) / 2
}

/// Adjusted Rand index (Hubert and Arabie). Two trivial, equal partitions
/// give `0/0`, reported as 1.
pub fn ari(a: &Partition, b: &Partition) -> Result<f64> {
    let t = ContingencyTable::new(a, b)?;
    let index: u128 = t.cells().map(|(_, _, c)| comb2(c)).sum();
    let rows: u128 = t.row_sums().iter().map(|&x| comb2(x)).sum();
    let cols: u128 = t.col_sums().iter().map(|&x| comb2(x)).sum();
    let pairs = comb2(t.total());
    if pairs == 0 {
        return Ok(1.0);
    }
    let expected = rows as f64 * cols as f64 / pairs as f64;
    let max_index = 0.5 * (rows as f64 + cols as f64);
    let num = index as f64 - expected;
    let den = max_index - expected;
    if den == 0.0 {
        return Ok(if num == 0.0 { 1.0 } else { 0.0 });
    }
    Ok(num / den)
}

fn entropy(sums: &[u64], n: f64) -> f64 {
    sums.iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Adjusted mutual information with natural logs, arithmetic-mean
/// normalization and the exact expected mutual information under random
/// relabeling with fixed marginals.
pub fn ami(a: &Partition, b: &Partition) -> Result<f64> {
    let t = ContingencyTable::new(a, b)?;
    if a.equivalent(b) {
        return Ok(1.0);
    }
    let n = t.total() as f64;
    let mi: f64 = t
        .cells()
        .map(|(i, j, c)| {
            let c = c as f64;
            let (ai, bj) = (t.row_sums()[i] as f64, t.col_sums()[j] as f64);
            c / n * (n * c / (ai * bj)).ln()
        })
        .sum();
    let emi = expected_mutual_information(&t);
    let mean_h = 0.5 * (entropy(t.row_sums(), n) + entropy(t.col_sums(), n));
    let den = mean_h - emi;
    if den.abs() <= 1e-12 {
        return Ok(0.0);
    }
    Ok(((mi - emi) / den).clamp(-1.0, 1.0))
}

fn expected_mutual_information(t: &ContingencyTable) -> f64 {
    let total = t.total() as usize;
    let n = total as f64;
    // ln(k!) for k = 0..=N.
    let mut lf = vec![0.0f64; total + 1];
    for k in 1..=total {
        lf[k] = lf[k - 1] + (k as f64).ln();
    }
    let mut emi = 0.0;
    for &a in t.row_sums() {
        for &b in t.col_sums() {
            let (a, b) = (a as usize, b as usize);
            let lo = (a + b).saturating_sub(total).max(1);
            let hi = a.min(b);
            let fixed = lf[a] + lf[b] + lf[total - a] + lf[total - b] - lf[total];
            for nij in lo..=hi {
                let log_p = fixed
                    - lf[nij]
                    - lf[a - nij]
                    - lf[b - nij]
                    - lf[total + nij - a - b];
                let x = nij as f64;
                emi += x / n * (n * x / (a as f64 * b as f64)).ln() * log_p.exp();
            }
        }
    }
    emi
}

fn set_f1(a: &[u64], b: &[u64]) -> f64 {
    let (mut i, mut j, mut common) = (0, 0, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    2.0 * common as f64 / (a.len() + b.len()) as f64
}

fn mean_best_match(from: &Cover, to: &Cover) -> f64 {
    let total: f64 = from
        .communities()
        .iter()
        .map(|c| {
            to.communities()
                .iter()
                .map(|d| set_f1(c, d))
                .fold(0.0, f64::max)
        })
        .sum();
    total / from.communities().len() as f64
}

/// Symmetric average best-match F1 between two covers.
pub fn overlapping_f1(truth: &Cover, pred: &Cover) -> Result<f64> {
    if truth.communities().is_empty() || pred.communities().is_empty() {
        return Err(Error::EmptyCover);
    }
    Ok(0.5 * (mean_best_match(truth, pred) + mean_best_match(pred, truth)))
}
