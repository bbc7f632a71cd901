//! Diagonal-free 4-cycles based at an edge.
//!
//! A 4-cycle `u–k–w–v–u` is based at `(u, v)` and diagonal-free when `k` is
//! not adjacent to `v` and `w` is not adjacent to `u`. `s_uv` counts the
//! neighbors `k` of `u` on at least one such cycle, `s_vu` the neighbors `w`
//! of `v`, and `gamma_max` is the largest number of these cycles passing
//! through any single intermediate node.

use super::Scratch;
use crate::error::Result;
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FourCycleStats {
    pub s_ij: usize,
    pub s_ji: usize,
    pub gamma_max: usize,
}

impl FourCycleStats {
    /// `(s_ij + s_ji) / (gamma_max · max_degree)`, or 0 without cycles.
    pub fn square_term(&self, max_degree: f64) -> f64 {
        let s = self.s_ij + self.s_ji;
        if s == 0 {
            0.0
        } else {
            s as f64 / (self.gamma_max as f64 * max_degree)
        }
    }
}

pub fn four_cycle_stats(g: &Graph, u: NodeId, v: NodeId) -> Result<FourCycleStats> {
    g.require_edge(u, v)?;
    let mut scratch = Scratch::new(g.node_count());
    Ok(stats_unchecked(g, u, v, &mut scratch))
}

pub(crate) fn stats_unchecked(g: &Graph, u: NodeId, v: NodeId, s: &mut Scratch) -> FourCycleStats {
    let stamp = s.bump();
    for &x in g.adj(u) {
        s.mark_u[x as usize] = stamp;
    }
    for &x in g.adj(v) {
        s.mark_v[x as usize] = stamp;
    }
    // Candidate far-side nodes w ∈ N(v) \ N[u], indexed by slot.
    let mut w_count: Vec<usize> = Vec::new();
    for &w in g.adj(v) {
        let w = w as usize;
        if w != u && s.mark_u[w] != stamp {
            s.slot_stamp[w] = stamp;
            s.slot[w] = w_count.len() as u32;
            w_count.push(0);
        }
    }
    if w_count.is_empty() {
        return FourCycleStats::default();
    }

    let mut stats = FourCycleStats::default();
    for &k in g.adj(u) {
        let k = k as usize;
        if k == v || s.mark_v[k] == stamp {
            continue;
        }
        let mut through_k = 0;
        for &w in g.adj(k) {
            let w = w as usize;
            if s.slot_stamp[w] == stamp {
                through_k += 1;
                w_count[s.slot[w] as usize] += 1;
            }
        }
        if through_k > 0 {
            stats.s_ij += 1;
            stats.gamma_max = stats.gamma_max.max(through_k);
        }
    }
    for &c in &w_count {
        if c > 0 {
            stats.s_ji += 1;
            stats.gamma_max = stats.gamma_max.max(c);
        }
    }
    stats
}
