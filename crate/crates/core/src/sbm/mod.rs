//! Stochastic block model sampling and the curvature separation study.

mod grid;
mod scores;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};
use crate::rng;

pub use grid::{
    aggregate, default_grid, run_grid, run_grid_replicates, run_replicate, write_grid_csv,
    GridRecord, GridSpec, ReplicateOutcome,
};
pub use scores::{aer, aop, percentile_rank, pps_indicator, ReplicateStats, ScoreName};

#[derive(Debug, Clone, PartialEq)]
pub struct SbmSpec {
    pub n: usize,
    /// Row-major `k × k` symmetric block probabilities.
    pub block_matrix: Vec<f64>,
    pub k: usize,
    pub seed: u64,
}

impl SbmSpec {
    pub fn new(n: usize, k: usize, block_matrix: Vec<f64>, seed: u64) -> Result<Self> {
        let spec = SbmSpec {
            n,
            block_matrix,
            k,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `p_within` on the diagonal, `p_across` elsewhere.
    pub fn planted(n: usize, k: usize, p_within: f64, p_across: f64, seed: u64) -> Result<Self> {
        let mut b = vec![p_across; k * k];
        for i in 0..k {
            b[i * k + i] = p_within;
        }
        Self::new(n, k, b, seed)
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidSbm("need at least one community".into()));
        }
        if self.n < self.k {
            return Err(Error::InvalidSbm(format!(
                "{} nodes cannot fill {} communities",
                self.n, self.k
            )));
        }
        if self.block_matrix.len() != self.k * self.k {
            return Err(Error::InvalidSbm("block matrix must be k × k".into()));
        }
        for r in 0..self.k {
            for c in 0..self.k {
                let p = self.block_matrix[r * self.k + c];
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidSbm(format!("probability {p} outside [0, 1]")));
                }
                if p != self.block_matrix[c * self.k + r] {
                    return Err(Error::InvalidSbm("block matrix is not symmetric".into()));
                }
            }
        }
        Ok(())
    }

    pub fn prob(&self, a: usize, b: usize) -> f64 {
        self.block_matrix[a * self.k + b]
    }

    /// Community sizes: an equal split, the first `n mod k` blocks one larger.
    pub fn block_sizes(&self) -> Vec<usize> {
        let (base, extra) = (self.n / self.k, self.n % self.k);
        (0..self.k).map(|i| base + usize::from(i < extra)).collect()
    }
}

/// Visits each index of `0..count` independently with probability `p`,
/// jumping over gaps with geometric skips.
fn bernoulli_indices<R: Rng>(rng: &mut R, count: u64, p: f64, mut visit: impl FnMut(u64)) {
    if p <= 0.0 || count == 0 {
        return;
    }
    if p >= 1.0 {
        (0..count).for_each(visit);
        return;
    }
    let log_q = (1.0 - p).ln();
    let mut i: u64 = 0;
    loop {
        // U in (0, 1]; floor(ln U / ln(1-p)) failures before the next success.
        let u: f64 = 1.0 - rng.random::<f64>();
        let skip = (u.ln() / log_q).floor();
        if skip >= (count - i) as f64 {
            return;
        }
        i += skip as u64;
        visit(i);
        i += 1;
        if i >= count {
            return;
        }
    }
}

/// Samples a graph with planted labels. Nodes `0..n` are assigned to blocks
/// in contiguous ranges; every unordered pair is an edge independently with
/// its block probability.
pub fn sample_sbm(spec: &SbmSpec) -> Result<(Graph, Partition)> {
    spec.validate()?;
    let sizes = spec.block_sizes();
    let mut starts = Vec::with_capacity(spec.k);
    let mut acc = 0;
    for &s in &sizes {
        starts.push(acc);
        acc += s;
    }
    let mut rng = rng::seeded(spec.seed);
    let mut edges = Vec::new();
    for a in 0..spec.k {
        for b in a..spec.k {
            let p = spec.prob(a, b);
            let (sa, na) = (starts[a], sizes[a]);
            let (sb, nb) = (starts[b], sizes[b]);
            if a == b {
                // Pairs i < j inside the block, indexed row by row.
                let count = (na * (na - 1) / 2) as u64;
                let mut row = 0usize;
                let mut row_start = 0u64;
                bernoulli_indices(&mut rng, count, p, |idx| {
                    while idx >= row_start + (na - 1 - row) as u64 {
                        row_start += (na - 1 - row) as u64;
                        row += 1;
                    }
                    let col = row + 1 + (idx - row_start) as usize;
                    edges.push((sa + row, sa + col));
                });
            } else {
                bernoulli_indices(&mut rng, (na * nb) as u64, p, |idx| {
                    let (r, c) = ((idx / nb as u64) as usize, (idx % nb as u64) as usize);
                    edges.push((sa + r, sb + c));
                });
            }
        }
    }
    let graph = Graph::with_node_count(spec.n, &edges)?;
    let mut labels = Vec::with_capacity(spec.n);
    for (block, &s) in sizes.iter().enumerate() {
        labels.extend(std::iter::repeat_n(block as u64, s));
    }
    Ok((graph, Partition::new(labels)))
}
