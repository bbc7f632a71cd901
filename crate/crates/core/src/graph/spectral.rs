//! Whole-graph quantities for small test graphs: diameter, normalized
//! Laplacian spectral gap and the exhaustive Cheeger constant.

use nalgebra::DMatrix;

use super::Graph;
use crate::error::{Error, Result};

const DIAMETER_LIMIT: usize = 10_000;
const SPECTRAL_LIMIT: usize = 2_000;
const CHEEGER_LIMIT: usize = 20;

/// Largest BFS eccentricity. Runs all-pairs BFS.
pub fn diameter(g: &Graph) -> Result<usize> {
    let n = g.node_count();
    if n > DIAMETER_LIMIT {
        return Err(Error::BruteForceLimit(format!(
            "diameter is limited to {DIAMETER_LIMIT} nodes"
        )));
    }
    let mut best = 0;
    for s in 0..n {
        let dist = g.bfs_dense(s, None);
        for d in dist {
            if d == usize::MAX {
                return Err(Error::Disconnected);
            }
            best = best.max(d);
        }
    }
    Ok(best)
}

/// Smallest non-zero eigenvalue of `I - D^{-1/2} A D^{-1/2}`.
pub fn spectral_gap(g: &Graph) -> Result<f64> {
    let n = g.node_count();
    if n > SPECTRAL_LIMIT {
        return Err(Error::BruteForceLimit(format!(
            "spectral gap is limited to {SPECTRAL_LIMIT} nodes"
        )));
    }
    if n < 2 || !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let inv_sqrt: Vec<f64> = (0..n).map(|i| 1.0 / (g.deg(i) as f64).sqrt()).collect();
    let mut lap = DMatrix::<f64>::identity(n, n);
    for &(u, v) in g.canonical_edges() {
        let (u, v) = (u as usize, v as usize);
        let w = -inv_sqrt[u] * inv_sqrt[v];
        lap[(u, v)] = w;
        lap[(v, u)] = w;
    }
    let mut eig: Vec<f64> = lap.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    // Connected: eigenvalue 0 is simple, so the gap is the second smallest.
    Ok(eig[1])
}

/// `min |∂S| / vol(S)` over non-empty `S` with `vol(S) <= vol(V)/2`.
pub fn cheeger_constant(g: &Graph) -> Result<f64> {
    let n = g.node_count();
    if n > CHEEGER_LIMIT {
        return Err(Error::BruteForceLimit(format!(
            "cheeger constant enumerates subsets of at most {CHEEGER_LIMIT} nodes"
        )));
    }
    if n < 2 || !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let degree: Vec<usize> = (0..n).map(|i| g.deg(i)).collect();
    let total: usize = degree.iter().sum();
    let edges = g.canonical_edges();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1u32 << n) - 1 {
        let vol: usize = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| degree[i]).sum();
        if 2 * vol > total || vol == 0 {
            continue;
        }
        let boundary = edges
            .iter()
            .filter(|&&(u, v)| (mask >> u & 1) != (mask >> v & 1))
            .count();
        best = best.min(boundary as f64 / vol as f64);
    }
    Ok(best)
}
