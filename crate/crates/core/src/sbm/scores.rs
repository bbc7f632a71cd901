//! Separation scores between within- and across-community curvature values.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Curvature values of one replicate split by planted labels.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReplicateStats {
    pub within_values: Vec<f64>,
    pub across_values: Vec<f64>,
}

impl ReplicateStats {
    pub fn within_count(&self) -> usize {
        self.within_values.len()
    }

    pub fn across_count(&self) -> usize {
        self.across_values.len()
    }

    fn min_within(&self) -> Option<f64> {
        self.within_values.iter().copied().reduce(f64::min)
    }

    fn max_across(&self) -> Option<f64> {
        self.across_values.iter().copied().reduce(f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ScoreName {
    #[serde(rename = "AER")]
    Aer,
    #[serde(rename = "AOP")]
    Aop,
    #[serde(rename = "PPS")]
    Pps,
}

impl ScoreName {
    pub const ALL: [ScoreName; 3] = [ScoreName::Aer, ScoreName::Aop, ScoreName::Pps];

    pub fn name(self) -> &'static str {
        match self {
            ScoreName::Aer => "AER",
            ScoreName::Aop => "AOP",
            ScoreName::Pps => "PPS",
        }
    }

    pub fn evaluate(self, stats: &ReplicateStats) -> f64 {
        match self {
            ScoreName::Aer => aer(stats),
            ScoreName::Aop => aop(stats),
            ScoreName::Pps => pps_indicator(stats) as f64,
        }
    }
}

impl fmt::Display for ScoreName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fraction of `set` that is `<= v`.
pub fn percentile_rank(v: f64, set: &[f64]) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(set.iter().filter(|&&x| x <= v).count() as f64 / set.len() as f64)
}

/// 1 when the smallest within value is at least the largest across value.
/// Either side empty counts as separated.
pub fn pps_indicator(stats: &ReplicateStats) -> u8 {
    match (stats.min_within(), stats.max_across()) {
        (Some(lo), Some(hi)) => u8::from(lo >= hi),
        _ => 1,
    }
}

/// Share of within edges strictly below the largest across value.
/// Either side empty gives 0.
pub fn aer(stats: &ReplicateStats) -> f64 {
    match stats.max_across() {
        Some(hi) if !stats.within_values.is_empty() => {
            let below = stats.within_values.iter().filter(|&&x| x < hi).count();
            below as f64 / stats.within_values.len() as f64
        }
        _ => 0.0,
    }
}

/// `rank(min within, across) + 1 - rank(max across, within)`, in `[0, 2]`.
/// Either side empty gives 2.
pub fn aop(stats: &ReplicateStats) -> f64 {
    match (stats.min_within(), stats.max_across()) {
        (Some(lo), Some(hi)) => {
            let first = percentile_rank(lo, &stats.across_values).expect("non-empty");
            let second = percentile_rank(hi, &stats.within_values).expect("non-empty");
            first + 1.0 - second
        }
        _ => 2.0,
    }
}
