//! The (p1, p2) grid study: replicate SBMs per cell, score every requested
//! curvature on the same replicate, average over replicates.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::scores::{ReplicateStats, ScoreName};
use super::{sample_sbm, SbmSpec};
use crate::curvature::{curvature_all, CurvatureKind};
use crate::error::{Error, Result};
use crate::numfmt::significant;
use crate::rng::replicate_seed;

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    /// `(p1, p2)` cells; each needs `p2 < p1`.
    pub cells: Vec<(f64, f64)>,
    pub n: usize,
    pub k: usize,
    pub replicates: usize,
    pub curvatures: Vec<CurvatureKind>,
    pub base_seed: u64,
}

impl GridSpec {
    fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::InvalidGrid("replicates must be positive".into()));
        }
        if self.cells.is_empty() {
            return Err(Error::InvalidGrid("no grid cells".into()));
        }
        if self.curvatures.is_empty() {
            return Err(Error::InvalidGrid("no curvatures requested".into()));
        }
        for &(p1, p2) in &self.cells {
            if p2.partial_cmp(&p1) != Some(std::cmp::Ordering::Less) {
                return Err(Error::InvalidGrid(format!("p2 = {p2} must be below p1 = {p1}")));
            }
        }
        Ok(())
    }

    fn curvatures_sorted(&self) -> Vec<CurvatureKind> {
        let mut kinds = self.curvatures.clone();
        kinds.sort_by_key(|k| k.name());
        kinds.dedup();
        kinds
    }
}

/// The illustrative 10 × 10 grid: `p1 = 0.1, ..., 1.0` and for each `p1`
/// ten values `p2 = 0.01 + j (p1 - 0.01) / 10`, `j = 0..9`.
pub fn default_grid() -> Vec<(f64, f64)> {
    let mut cells = Vec::with_capacity(100);
    for i in 1..=10 {
        let p1 = i as f64 / 10.0;
        for j in 0..10 {
            cells.push((p1, 0.01 + j as f64 * (p1 - 0.01) / 10.0));
        }
    }
    cells
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRecord {
    pub p1: f64,
    pub p2: f64,
    pub curvature: CurvatureKind,
    pub score_name: ScoreName,
    pub value: f64,
    pub replicates: usize,
    pub base_seed: u64,
}

/// Scores of one replicate graph, per curvature in name order, scores in
/// `ScoreName::ALL` order.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateOutcome {
    pub p1: f64,
    pub p2: f64,
    pub replicate: usize,
    pub seed: u64,
    pub edges: usize,
    pub scores: Vec<(CurvatureKind, [f64; 3])>,
}

/// Samples replicate `r` of cell `(p1, p2)` and scores each curvature.
pub fn run_replicate(
    spec: &GridSpec,
    (p1, p2): (f64, f64),
    r: usize,
) -> Result<ReplicateOutcome> {
    let seed = replicate_seed(spec.base_seed, r as u64);
    let sbm = SbmSpec::planted(spec.n, spec.k, p1, p2, seed)?;
    let (g, labels) = sample_sbm(&sbm)?;
    let same: Vec<bool> = g
        .canonical_edges()
        .iter()
        .map(|&(u, v)| labels.label(u as usize) == labels.label(v as usize))
        .collect();
    let mut scores = Vec::new();
    for kind in spec.curvatures_sorted() {
        let mut stats = ReplicateStats::default();
        if g.edge_count() > 0 {
            let values = curvature_all(&g, kind)?.values;
            for (&x, &s) in values.iter().zip(&same) {
                if s {
                    stats.within_values.push(x);
                } else {
                    stats.across_values.push(x);
                }
            }
        }
        let row = ScoreName::ALL.map(|s| s.evaluate(&stats));
        scores.push((kind, row));
    }
    Ok(ReplicateOutcome {
        p1,
        p2,
        replicate: r,
        seed,
        edges: g.edge_count(),
        scores,
    })
}

/// Every replicate of every cell, cells in input order, replicates
/// ascending. Work units run on the current rayon pool.
pub fn run_grid_replicates(spec: &GridSpec) -> Result<Vec<ReplicateOutcome>> {
    spec.validate()?;
    let units: Vec<((f64, f64), usize)> = spec
        .cells
        .iter()
        .flat_map(|&c| (0..spec.replicates).map(move |r| (c, r)))
        .collect();
    units
        .par_iter()
        .map(|&(cell, r)| run_replicate(spec, cell, r))
        .collect()
}

/// Mean score over replicates per cell, curvature and score, sorted by
/// `(p1, p2, curvature name, score name)`.
pub fn run_grid(spec: &GridSpec) -> Result<Vec<GridRecord>> {
    let outcomes = run_grid_replicates(spec)?;
    Ok(aggregate(spec, &outcomes))
}

pub fn aggregate(spec: &GridSpec, outcomes: &[ReplicateOutcome]) -> Vec<GridRecord> {
    let mut cells = spec.cells.clone();
    cells.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    cells.dedup();
    let kinds = spec.curvatures_sorted();
    let mut records = Vec::new();
    for &(p1, p2) in &cells {
        let mine: Vec<&ReplicateOutcome> = outcomes
            .iter()
            .filter(|o| o.p1 == p1 && o.p2 == p2)
            .collect();
        for (ki, &kind) in kinds.iter().enumerate() {
            for (si, &score) in ScoreName::ALL.iter().enumerate() {
                // Replicates are summed in index order so the mean is
                // independent of scheduling.
                let sum: f64 = mine.iter().map(|o| o.scores[ki].1[si]).sum();
                records.push(GridRecord {
                    p1,
                    p2,
                    curvature: kind,
                    score_name: score,
                    value: sum / mine.len() as f64,
                    replicates: mine.len(),
                    base_seed: spec.base_seed,
                });
            }
        }
    }
    records
}

pub fn write_grid_csv<W: Write>(records: &[GridRecord], mut out: W) -> Result<()> {
    writeln!(out, "p1,p2,curvature,score,value,replicates,base_seed")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            significant(r.p1, 6),
            significant(r.p2, 6),
            r.curvature,
            r.score_name,
            significant(r.value, 6),
            r.replicates,
            r.base_seed
        )?;
    }
    Ok(())
}
