//! Shared fixtures for the benchmarks in `benches/`.

use lrc_core::{sample_sbm, Graph, Partition, SbmSpec};

/// A ten-block planted partition with mean degree near 20.
pub fn ten_blocks(n: usize, seed: u64) -> (Graph, Partition) {
    let block = (n / 10) as f64;
    let p_within = 16.0 / block;
    let p_across = 4.0 / (n as f64 - block);
    sample_sbm(&SbmSpec::planted(n, 10, p_within.min(1.0), p_across, seed).unwrap()).unwrap()
}
