//! Exact Ollivier-Ricci curvature with uniform neighbor measures.
//!
//! For an edge `(u, v)` with `a = deg(u)` and `b = deg(v)`, scaling both
//! measures by `a·b` makes every mass an integer (`b` on each neighbor of
//! `u`, `a` on each neighbor of `v`), so W1 is an integral transportation
//! problem. Any `x ∈ N(u)` and `y ∈ N(v)` are within distance 3 through
//! `x–u–v–y`, so the ground costs are 0 (same node), 1 (adjacent), 2 (shared
//! neighbor) or 3, all measured in the full graph.
//!
//! Before solving, mass shared by both measures is left in place (W1 only
//! depends on the difference of the measures) and identical rows and
//! columns of the cost matrix are merged. Since every pair costs at most 3,
//! the optimum is `3·T` minus the best saving over the few cells cheaper
//! than 3, which keeps the flow network sparse.
//!
//! The row of `v` and the column of `u` cost 1 everywhere. Fixing their
//! dual values in {0, 1, 2} leaves three cases, so the best saving is
//! `min(2T, T + a + b + F, 2(a + b) + G)` where `G` is the best saving on
//! the remaining cells and `F` the largest flow over their cost-1 cells.

use super::Scratch;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::transport::TransportSolver;

/// Uniform probability measure on the neighbors of a node.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMeasure {
    pub support: Vec<NodeId>,
    pub mass: f64,
}

impl LocalMeasure {
    pub fn mass_at(&self, node: NodeId) -> f64 {
        if self.support.binary_search(&node).is_ok() {
            self.mass
        } else {
            0.0
        }
    }
}

pub fn local_measure(g: &Graph, node: NodeId) -> Result<LocalMeasure> {
    let support: Vec<NodeId> = g.neighbors(node)?.iter().map(|&x| x as usize).collect();
    if support.is_empty() {
        return Err(Error::IsolatedNode(node));
    }
    let mass = 1.0 / support.len() as f64;
    Ok(LocalMeasure { support, mass })
}

#[derive(Debug, Default)]
pub(crate) struct OtScratch {
    bits: Vec<u64>,
    /// Two-hop masks over the center's neighbors, `words` per cached node.
    rows: Vec<u64>,
    supply: Vec<u64>,
    demand: Vec<u64>,
    /// Cells cheaper than 3 per row as `(column, cost)`, rows back to back.
    cells: Vec<(u32, u8)>,
    row_start: Vec<usize>,
    order: Vec<u32>,
    merged_supply: Vec<u64>,
    merged_rows: Vec<u32>,
    col_start: Vec<usize>,
    col_cells: Vec<(u32, u8)>,
    col_fill: Vec<usize>,
    col_order: Vec<u32>,
    merged_demand: Vec<u64>,
    arcs: Vec<(u32, u32, u32)>,
    left: Vec<u64>,
    right: Vec<u64>,
    solver: TransportSolver,
    /// Node whose two-hop marks are current, with the stamp they carry.
    center: Option<(NodeId, u32)>,
}

/// W1 between the neighbor measures of `u` and `v` as an exact fraction
/// `(numerator, denominator)` with denominator `deg(u)·deg(v)`.
pub fn w1_local_exact(g: &Graph, u: NodeId, v: NodeId) -> Result<(u64, u64)> {
    g.require_edge(u, v)?;
    let mut scratch = Scratch::new(g.node_count());
    Ok(w1_unchecked(g, u, v, &mut scratch))
}

pub fn w1_local(g: &Graph, u: NodeId, v: NodeId) -> Result<f64> {
    let (num, den) = w1_local_exact(g, u, v)?;
    Ok(num as f64 / den as f64)
}

pub fn orc_edge(g: &Graph, u: NodeId, v: NodeId) -> Result<f64> {
    g.require_edge(u, v)?;
    let mut scratch = Scratch::new(g.node_count());
    Ok(orc_unchecked(g, u, v, &mut scratch))
}

pub(crate) fn orc_unchecked(g: &Graph, u: NodeId, v: NodeId, s: &mut Scratch) -> f64 {
    // Canonical edges arrive grouped by `u`, so mark around `u` and reuse.
    let (num, den) = w1_unchecked(g, v, u, s);
    // (den - num) / den with a single rounding; num <= 3·den.
    (den as i64 - num as i64) as f64 / den as f64
}

pub(crate) fn w1_unchecked(g: &Graph, u: NodeId, v: NodeId, s: &mut Scratch) -> (u64, u64) {
    let xs = g.adj(u);
    let ys = g.adj(v);
    let (a, b) = (xs.len(), ys.len());
    let words = b.div_ceil(64);
    let stamp = match s.ollivier.center {
        Some((c, stamp)) if c == v && stamp == s.stamp => stamp,
        _ => {
            let stamp = s.bump();
            mark_two_hop(g, v, stamp, s);
            s.ollivier.center = Some((v, stamp));
            s.ollivier.rows.clear();
            stamp
        }
    };
    let ot = &mut s.ollivier;

    ot.supply.clear();
    ot.supply.resize(a, b as u64);
    ot.demand.clear();
    ot.demand.resize(b, a as u64);
    let shared = a.min(b) as u64;
    let mut v_row = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x as usize == v {
            v_row = i;
        }
        if s.mark_v[x as usize] == stamp {
            let j = s.pos[x as usize] as usize;
            ot.supply[i] -= shared;
            ot.demand[j] -= shared;
        }
    }

    // Sparse rows: cost 1 where x is adjacent to y, 2 where they share a
    // neighbor; everything else costs 3. Rows and columns whose mass
    // cancelled out are skipped, as are the row of v and the column of u.
    let u_col = s.pos[u] as usize;
    ot.cells.clear();
    ot.row_start.clear();
    for (i, &x) in xs.iter().enumerate() {
        ot.row_start.push(ot.cells.len());
        if ot.supply[i] == 0 || i == v_row {
            continue;
        }
        let x = x as usize;
        // The mask depends only on x and the center, so later edges at the
        // same center reuse it.
        if s.row_stamp[x] != stamp {
            s.row_stamp[x] = stamp;
            let base = ot.rows.len();
            s.row_slot[x] = (base / words.max(1)) as u32;
            ot.rows.resize(base + words, 0);
            for &z in g.adj(x) {
                let z = z as usize;
                if s.slot_stamp[z] == stamp {
                    let from = s.slot[z] as usize * words;
                    for w in 0..words {
                        ot.rows[base + w] |= ot.bits[from + w];
                    }
                }
            }
        }
        let far = s.row_slot[x] as usize * words;
        let own = (s.slot_stamp[x] == stamp).then(|| s.slot[x] as usize * words);
        for w in 0..words {
            let near = own.map_or(0, |base| ot.bits[base + w]);
            let mut any = ot.rows[far + w] | near;
            if w == u_col / 64 {
                any &= !(1u64 << (u_col % 64));
            }
            while any != 0 {
                let bit = any.trailing_zeros();
                any &= any - 1;
                let j = w * 64 + bit as usize;
                if ot.demand[j] == 0 {
                    continue;
                }
                let cost = if near >> bit & 1 == 1 { 1 } else { 2 };
                ot.cells.push((j as u32, cost));
            }
        }
    }
    ot.row_start.push(ot.cells.len());

    let total: u64 = ot.supply.iter().sum();
    let ends = 2 * (a + b) as u64;
    let mut saved = 2 * total;
    if ends < saved {
        saved = saved.min(ends + solve_sparse(ot, a, b, false, saved - ends));
    }
    if total + ends / 2 < saved {
        let cap = saved - total - ends / 2;
        saved = saved.min(total + ends / 2 + solve_sparse(ot, a, b, true, cap));
    }
    (3 * total - saved, (a * b) as u64)
}

/// Marks the neighbors of `v` with their positions and gives every node
/// within two hops a slot whose bits (`bits[slot(z)]`, bit `j`) say which
/// `ys[j]` it is adjacent to.
fn mark_two_hop(g: &Graph, v: NodeId, stamp: u32, s: &mut Scratch) {
    let ys = g.adj(v);
    let words = ys.len().div_ceil(64);
    let ot = &mut s.ollivier;
    let bound: usize = ys.iter().map(|&y| g.adj(y as usize).len()).sum();
    if ot.bits.len() < bound * words {
        ot.bits.resize(bound * words, 0);
    }
    let mut rows = 0usize;
    for (j, &y) in ys.iter().enumerate() {
        let y = y as usize;
        s.mark_v[y] = stamp;
        s.pos[y] = j as u32;
        let (word, bit) = (j / 64, 1u64 << (j % 64));
        for &z in g.adj(y) {
            let z = z as usize;
            if s.slot_stamp[z] != stamp {
                s.slot_stamp[z] = stamp;
                s.slot[z] = rows as u32;
                ot.bits[rows * words..(rows + 1) * words].fill(0);
                rows += 1;
            }
            ot.bits[s.slot[z] as usize * words + word] |= bit;
        }
    }
}

/// Merges rows with identical cheap cells, then columns with identical
/// cheap cells, and returns the largest saving against the all-3 plan, or
/// with `adjacent_only` the largest flow over cost-1 cells.
/// Max-weight value over the cells, exact below `cap`; any value at or above
/// `cap` only certifies that the optimum reaches it.
fn solve_sparse(ot: &mut OtScratch, a: usize, b: usize, adjacent_only: bool, cap: u64) -> u64 {
    let OtScratch {
        supply,
        demand,
        cells,
        row_start,
        order,
        merged_supply,
        merged_rows,
        col_start,
        col_cells,
        col_fill,
        col_order,
        merged_demand,
        arcs,
        left,
        right,
        solver,
        ..
    } = ot;
    let row = |i: usize| &cells[row_start[i]..row_start[i + 1]];

    // A greedy plan, cheapest cells first, is feasible and so a lower bound.
    let weight = |c: u8| if adjacent_only { (c == 1) as u64 } else { 3 - c as u64 };
    left.clone_from(supply);
    right.clone_from(demand);
    let mut greedy = 0;
    for cost in 1..=if adjacent_only { 1 } else { 2 } {
        for (i, rest) in left.iter_mut().enumerate() {
            for &(j, c) in row(i) {
                if c == cost && *rest > 0 {
                    let f = (*rest).min(right[j as usize]);
                    *rest -= f;
                    right[j as usize] -= f;
                    greedy += f * weight(c);
                }
            }
        }
    }
    if greedy >= cap {
        return greedy;
    }
    arcs.clear();
    if cells.len() <= 4 * (a + b) {
        // Sparse cells: rows rarely repeat, so merging costs more than it
        // saves; leaf peeling compacts the problem instead.
        for i in 0..a {
            for &(j, c) in row(i) {
                if weight(c) > 0 {
                    arcs.push((i as u32, j, weight(c) as u32));
                }
            }
        }
        return solver.max_weight(supply, demand, arcs);
    }
    order.clear();
    order.extend((0..a as u32).filter(|&i| supply[i as usize] > 0 && !row(i as usize).is_empty()));
    if order.is_empty() {
        return 0;
    }
    order.sort_unstable_by(|&p, &q| row(p as usize).cmp(row(q as usize)));
    merged_supply.clear();
    merged_rows.clear();
    for k in 0..order.len() {
        let i = order[k] as usize;
        if k == 0 || row(order[k - 1] as usize) != row(i) {
            merged_supply.push(0);
            merged_rows.push(i as u32);
        }
        *merged_supply.last_mut().unwrap() += supply[i];
    }

    // Column signatures as (merged row, cost), in merged row order.
    col_start.clear();
    col_start.resize(b + 1, 0);
    for &r in merged_rows.iter() {
        for &(j, _) in row(r as usize) {
            col_start[j as usize + 1] += 1;
        }
    }
    for j in 0..b {
        col_start[j + 1] += col_start[j];
    }
    col_cells.clear();
    col_cells.resize(col_start[b], (0, 0));
    col_fill.clear();
    col_fill.extend_from_slice(&col_start[..b]);
    for (g, &r) in merged_rows.iter().enumerate() {
        for &(j, c) in row(r as usize) {
            col_cells[col_fill[j as usize]] = (g as u32, c);
            col_fill[j as usize] += 1;
        }
    }
    let col = |j: usize| &col_cells[col_start[j]..col_start[j + 1]];
    col_order.clear();
    col_order.extend((0..b as u32).filter(|&j| demand[j as usize] > 0 && !col(j as usize).is_empty()));
    col_order.sort_unstable_by(|&p, &q| col(p as usize).cmp(col(q as usize)));
    merged_demand.clear();
    for k in 0..col_order.len() {
        let j = col_order[k] as usize;
        if k == 0 || col(col_order[k - 1] as usize) != col(j) {
            merged_demand.push(0);
            // One arc per (merged row, column group) from the first member.
            for &(g, c) in col(j) {
                let weight = if adjacent_only { (c == 1) as u32 } else { 3 - c as u32 };
                if weight > 0 {
                    arcs.push((g, merged_demand.len() as u32 - 1, weight));
                }
            }
        }
        *merged_demand.last_mut().unwrap() += demand[j];
    }
    solver.max_weight(merged_supply, merged_demand, arcs)
}
