use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Graph, Partition};
use crate::rng;

pub const DEFAULT_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    pub partition: Partition,
    /// Sweeps performed, including the final one without changes.
    pub iterations: usize,
    pub seed: u64,
    pub converged: bool,
}

/// Asynchronous label propagation.
///
/// Every node starts with its own label. Each sweep visits the nodes in a
/// fresh seeded random order; a node whose label is not among the most
/// frequent labels of its neighbors takes one of those uniformly at random.
/// Stops after a sweep without changes or after `max_sweeps`.
pub fn lpa_detect(g: &Graph, seed: u64, max_sweeps: usize) -> DetectionResult {
    let n = g.node_count();
    let mut rng = rng::seeded(seed);
    let mut labels: Vec<u32> = (0..n as u32).collect();
    let mut order: Vec<usize> = (0..n).collect();
    let mut count = vec![0u32; n];
    let mut touched: Vec<u32> = Vec::new();
    let mut best: Vec<u32> = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_sweeps {
        iterations += 1;
        order.shuffle(&mut rng);
        let mut changed = false;
        for &v in &order {
            let nbrs = g.adj(v);
            if nbrs.is_empty() {
                continue;
            }
            for &w in nbrs {
                let l = labels[w as usize];
                if count[l as usize] == 0 {
                    touched.push(l);
                }
                count[l as usize] += 1;
            }
            let top = touched.iter().map(|&l| count[l as usize]).max().unwrap_or(0);
            best.clear();
            best.extend(touched.iter().copied().filter(|&l| count[l as usize] == top));
            for &l in &touched {
                count[l as usize] = 0;
            }
            touched.clear();
            if best.contains(&labels[v]) {
                continue;
            }
            // Sorted so the draw does not depend on neighbor order.
            best.sort_unstable();
            labels[v] = best[rng.random_range(0..best.len())];
            changed = true;
        }
        if !changed {
            converged = true;
            break;
        }
    }
    DetectionResult {
        partition: Partition::new(labels.into_iter().map(u64::from).collect()),
        iterations,
        seed,
        converged,
    }
}
