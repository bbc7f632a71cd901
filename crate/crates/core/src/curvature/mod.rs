//! Per-edge discrete Ricci curvatures.
//!
//! For an edge `(i, j)` with degrees `n_i`, `n_j` and `n_ij` shared
//! neighbors:
//!
//! - Forman: `4 - n_i - n_j + 3 n_ij`
//! - Lower Ricci: `2/n_i + 2/n_j - 2 + 2 n_ij / max(n_i, n_j) + n_ij / min(n_i, n_j)`
//! - Balanced Forman: lower Ricci plus the 4-cycle term
//!   `(s_ij + s_ji) / (gamma_max · max(n_i, n_j))`, zero when there are no
//!   diagonal-free 4-cycles on the edge
//! - Ollivier-Ricci: `1 - W1(m_i, m_j)` with `m_i` uniform on the neighbors
//!   of `i` (no idleness), solved exactly.
//!
//! All four are evaluated literally for degree-1 endpoints.

mod ollivier;
mod squares;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::numfmt;

pub use ollivier::{local_measure, orc_edge, w1_local, w1_local_exact, LocalMeasure};
pub use squares::{four_cycle_stats, FourCycleStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurvatureKind {
    Frc,
    Bfc,
    Lrc,
    Orc,
}

impl CurvatureKind {
    pub const ALL: [CurvatureKind; 4] = [
        CurvatureKind::Frc,
        CurvatureKind::Bfc,
        CurvatureKind::Lrc,
        CurvatureKind::Orc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurvatureKind::Frc => "frc",
            CurvatureKind::Bfc => "bfc",
            CurvatureKind::Lrc => "lrc",
            CurvatureKind::Orc => "orc",
        }
    }
}

impl fmt::Display for CurvatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurvatureKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "frc" => Ok(CurvatureKind::Frc),
            "bfc" => Ok(CurvatureKind::Bfc),
            "lrc" => Ok(CurvatureKind::Lrc),
            "orc" => Ok(CurvatureKind::Orc),
            other => Err(format!("unknown curvature {other:?} (expected lrc, frc, bfc or orc)")),
        }
    }
}

/// Curvature values aligned with [`Graph::canonical_edges`].
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeCurvatures {
    pub kind: CurvatureKind,
    pub values: Vec<f64>,
    pub graph_fingerprint: u64,
}

impl EdgeCurvatures {
    /// Checks the range invariants of `kind`.
    pub fn check_invariants(&self, g: &Graph) -> std::result::Result<(), String> {
        if self.values.len() != g.edge_count() {
            return Err(format!(
                "{} values for {} edges",
                self.values.len(),
                g.edge_count()
            ));
        }
        if self.graph_fingerprint != fingerprint(g) {
            return Err("fingerprint does not match graph".into());
        }
        for (i, &x) in self.values.iter().enumerate() {
            let ok = match self.kind {
                CurvatureKind::Lrc | CurvatureKind::Bfc => (-2.0..=2.0).contains(&x),
                CurvatureKind::Orc => x <= 1.0,
                CurvatureKind::Frc => x.fract() == 0.0,
            };
            if !ok {
                return Err(format!("{} value {x} on edge {i} out of range", self.kind));
            }
        }
        Ok(())
    }
}

/// FNV-1a over the canonical edge list.
pub fn fingerprint(g: &Graph) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |x: u32| {
        for byte in x.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    eat(g.node_count() as u32);
    for &(u, v) in g.canonical_edges() {
        eat(u);
        eat(v);
    }
    h
}

/// Degree and shared-neighbor triple of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct LocalTriple {
    pub du: usize,
    pub dv: usize,
    pub common: usize,
}

impl LocalTriple {
    fn of(g: &Graph, u: NodeId, v: NodeId) -> Self {
        LocalTriple {
            du: g.deg(u),
            dv: g.deg(v),
            common: g.common(u, v),
        }
    }

    fn max_deg(self) -> f64 {
        self.du.max(self.dv) as f64
    }

    fn frc(self) -> f64 {
        (4 - self.du as i64 - self.dv as i64 + 3 * self.common as i64) as f64
    }

    /// `du·dv`, the common denominator of LRC and the Jost–Liu terms.
    fn denominator(self) -> i64 {
        (self.du * self.dv) as i64
    }

    /// Numerators over `du·dv`, so each value is rounded once.
    fn lrc(self) -> f64 {
        let (d, c) = (self.denominator(), self.common as i64);
        let (hi, lo) = (self.du.max(self.dv) as i64, self.du.min(self.dv) as i64);
        let num = 2 * (self.du + self.dv) as i64 - 2 * d + 2 * c * lo + c * hi;
        num as f64 / d as f64
    }
}

/// Lower Ricci curvature from a degree/shared-neighbor triple.
pub fn lrc_from_counts(du: usize, dv: usize, common: usize) -> f64 {
    LocalTriple { du, dv, common }.lrc()
}

pub fn frc_edge(g: &Graph, u: NodeId, v: NodeId) -> Result<f64> {
    g.require_edge(u, v)?;
    Ok(LocalTriple::of(g, u, v).frc())
}

pub fn lrc_edge(g: &Graph, u: NodeId, v: NodeId) -> Result<f64> {
    g.require_edge(u, v)?;
    Ok(LocalTriple::of(g, u, v).lrc())
}

pub fn bfc_edge(g: &Graph, u: NodeId, v: NodeId) -> Result<f64> {
    g.require_edge(u, v)?;
    let mut scratch = Scratch::new(g.node_count());
    Ok(bfc_unchecked(g, u, v, &mut scratch))
}

fn bfc_unchecked(g: &Graph, u: NodeId, v: NodeId, scratch: &mut Scratch) -> f64 {
    let triple = LocalTriple::of(g, u, v);
    let stats = squares::stats_unchecked(g, u, v, scratch);
    triple.lrc() + stats.square_term(triple.max_deg())
}

/// `n_ij / max(n_i, n_j)`, an upper bound on ORC.
pub fn orc_upper_bound(g: &Graph, u: NodeId, v: NodeId) -> Result<f64> {
    g.require_edge(u, v)?;
    let t = LocalTriple::of(g, u, v);
    Ok(t.common as f64 / t.max_deg())
}

/// Jost–Liu lower bound on ORC with positive-part clamps.
pub fn jost_liu_clamped_lower(g: &Graph, u: NodeId, v: NodeId) -> Result<f64> {
    g.require_edge(u, v)?;
    let t = LocalTriple::of(g, u, v);
    let (a, b) = clamp_arguments(t);
    let num = -a.max(0) - b.max(0) + (t.common * t.du.min(t.dv)) as i64;
    Ok(num as f64 / t.denominator() as f64)
}

/// The two clamped arguments scaled by `du·dv`.
fn clamp_arguments(t: LocalTriple) -> (i64, i64) {
    let base = t.denominator() - (t.du + t.dv) as i64;
    let c = t.common as i64;
    (base - c * t.du.max(t.dv) as i64, base - c * t.du.min(t.dv) as i64)
}

/// True when both clamp arguments of the Jost–Liu bound are non-negative,
/// i.e. the clamped bound coincides with the lower Ricci curvature.
pub fn clamps_inactive(g: &Graph, u: NodeId, v: NodeId) -> Result<bool> {
    g.require_edge(u, v)?;
    let (a, b) = clamp_arguments(LocalTriple::of(g, u, v));
    Ok(a >= 0 && b >= 0)
}

/// Per-thread marker arrays sized to the node count. Stamps avoid clearing
/// between edges.
pub(crate) struct Scratch {
    pub stamp: u32,
    pub mark_u: Vec<u32>,
    pub mark_v: Vec<u32>,
    pub slot_stamp: Vec<u32>,
    pub slot: Vec<u32>,
    pub pos: Vec<u32>,
    /// Cached two-hop row masks per node, valid for the current center.
    pub row_stamp: Vec<u32>,
    pub row_slot: Vec<u32>,
    pub ollivier: ollivier::OtScratch,
}

impl Scratch {
    pub fn new(n: usize) -> Self {
        Scratch {
            stamp: 0,
            mark_u: vec![0; n],
            mark_v: vec![0; n],
            slot_stamp: vec![0; n],
            slot: vec![0; n],
            pos: vec![0; n],
            row_stamp: vec![0; n],
            row_slot: vec![0; n],
            ollivier: ollivier::OtScratch::default(),
        }
    }

    /// Starts a new edge; returns the fresh stamp.
    pub fn bump(&mut self) -> u32 {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark_u.fill(0);
            self.mark_v.fill(0);
            self.slot_stamp.fill(0);
            self.row_stamp.fill(0);
            self.stamp = 1;
        }
        self.stamp
    }
}

/// Curvature of every canonical edge. Work is split across the current
/// rayon pool; the output order and values do not depend on the pool size.
pub fn curvature_all(g: &Graph, kind: CurvatureKind) -> Result<EdgeCurvatures> {
    let edges = g.canonical_edges();
    if edges.is_empty() {
        return Err(Error::NoEdges);
    }
    let values: Vec<f64> = match kind {
        CurvatureKind::Frc => edges
            .par_iter()
            .map(|&(u, v)| LocalTriple::of(g, u as usize, v as usize).frc())
            .collect(),
        CurvatureKind::Lrc => edges
            .par_iter()
            .map(|&(u, v)| LocalTriple::of(g, u as usize, v as usize).lrc())
            .collect(),
        CurvatureKind::Bfc => edges
            .par_iter()
            .map_init(
                || Scratch::new(g.node_count()),
                |s, &(u, v)| bfc_unchecked(g, u as usize, v as usize, s),
            )
            .collect(),
        CurvatureKind::Orc => edges
            .par_iter()
            .map_init(
                || Scratch::new(g.node_count()),
                |s, &(u, v)| ollivier::orc_unchecked(g, u as usize, v as usize, s),
            )
            .collect(),
    };
    Ok(EdgeCurvatures {
        kind,
        values,
        graph_fingerprint: fingerprint(g),
    })
}

/// Lower Ricci curvature of every canonical edge on the calling thread.
pub fn lrc_all_sequential(g: &Graph) -> Vec<f64> {
    g.canonical_edges()
        .iter()
        .map(|&(u, v)| LocalTriple::of(g, u as usize, v as usize).lrc())
        .collect()
}

/// Edges where the chain `LRC <= BFC <= ORC` fails, for diagnostics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ChainReport {
    pub edges: usize,
    pub lrc_above_orc: usize,
    pub bfc_above_orc: usize,
    /// Violations on edges whose Jost–Liu clamps are inactive (should be 0).
    pub clamp_inactive_violations: usize,
    /// Up to ten `(u, v, lrc, bfc, orc)` samples in external ids.
    pub samples: Vec<(u64, u64, f64, f64, f64)>,
}

pub fn chain_report(g: &Graph) -> Result<ChainReport> {
    let lrc = curvature_all(g, CurvatureKind::Lrc)?;
    let bfc = curvature_all(g, CurvatureKind::Bfc)?;
    let orc = curvature_all(g, CurvatureKind::Orc)?;
    let mut report = ChainReport {
        edges: g.edge_count(),
        ..Default::default()
    };
    for (i, &(u, v)) in g.canonical_edges().iter().enumerate() {
        let (l, b, o) = (lrc.values[i], bfc.values[i], orc.values[i]);
        let lrc_bad = l > o + 1e-12;
        let bfc_bad = b > o + 1e-12;
        report.lrc_above_orc += lrc_bad as usize;
        report.bfc_above_orc += bfc_bad as usize;
        if lrc_bad && clamps_inactive(g, u as usize, v as usize)? {
            report.clamp_inactive_violations += 1;
        }
        if (lrc_bad || bfc_bad) && report.samples.len() < 10 {
            report.samples.push((
                g.external_id(u as usize),
                g.external_id(v as usize),
                l,
                b,
                o,
            ));
        }
    }
    Ok(report)
}

/// Writes `u,v,curvature` rows in canonical edge order with external ids.
pub fn write_curvature_csv<W: Write>(g: &Graph, c: &EdgeCurvatures, mut out: W) -> Result<()> {
    assert_eq!(c.values.len(), g.edge_count(), "one value per edge");
    writeln!(out, "u,v,curvature")?;
    for (&(u, v), &x) in g.canonical_edges().iter().zip(&c.values) {
        let (a, b) = (g.external_id(u as usize), g.external_id(v as usize));
        writeln!(out, "{a},{b},{}", numfmt::significant(x, 12))?;
    }
    Ok(())
}
