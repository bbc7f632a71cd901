//! Curvature-based edge pruning.
//!
//! Pipeline: compute a curvature on every edge (lower Ricci by default),
//! fit a two-component Gaussian mixture to the values, take the density
//! valley `beta` between the two means and keep exactly the edges with
//! curvature `>= beta`. The node set never changes. A fit without an
//! interior valley leaves the graph untouched.

mod gmm;
mod threshold;

use serde::Serialize;

use crate::curvature::{curvature_all, CurvatureKind, EdgeCurvatures};
use crate::error::{Error, Result};
use crate::graph::Graph;

pub use gmm::{fit_gmm2, mixture_density, GmmConfig, GmmFit};
pub use threshold::{find_threshold, ThresholdMode, ThresholdResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    /// Mixture fit and valley search.
    Auto,
    /// Prune at the given curvature value, no fit.
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreprocessConfig {
    pub curvature: CurvatureKind,
    pub threshold: Threshold,
    pub gmm: GmmConfig,
    pub min_edges: usize,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            curvature: CurvatureKind::Lrc,
            threshold: Threshold::Auto,
            gmm: GmmConfig::default(),
            min_edges: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PruneReport {
    pub edges_before: usize,
    pub edges_after: usize,
    pub removed: usize,
    pub beta_used: Option<f64>,
    /// Keep flag per canonical edge of the input graph.
    #[serde(skip)]
    pub kept: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct PreprocessOutcome {
    pub graph: Graph,
    pub curvatures: EdgeCurvatures,
    pub fit: Option<GmmFit>,
    pub threshold: ThresholdResult,
    pub report: PruneReport,
}

/// Keeps the edges whose value is at least `beta` (ties kept).
pub fn prune_at(g: &Graph, values: &[f64], beta: f64) -> (Graph, PruneReport) {
    assert_eq!(values.len(), g.edge_count(), "one value per edge");
    let kept: Vec<bool> = values.iter().map(|&x| x >= beta).collect();
    let graph = g.retain_edges(|i, _, _| kept[i]);
    let report = PruneReport {
        edges_before: g.edge_count(),
        edges_after: graph.edge_count(),
        removed: g.edge_count() - graph.edge_count(),
        beta_used: Some(beta),
        kept,
    };
    (graph, report)
}

fn unchanged(g: &Graph) -> PruneReport {
    PruneReport {
        edges_before: g.edge_count(),
        edges_after: g.edge_count(),
        removed: 0,
        beta_used: None,
        kept: vec![true; g.edge_count()],
    }
}

pub fn preprocess(g: &Graph, config: &PreprocessConfig) -> Result<PreprocessOutcome> {
    if let Threshold::Auto = config.threshold {
        if g.edge_count() < config.min_edges {
            return Err(Error::InsufficientData(format!(
                "{} edges, at least {} required",
                g.edge_count(),
                config.min_edges
            )));
        }
    }
    let curvatures = curvature_all(g, config.curvature)?;
    let (fit, threshold) = match config.threshold {
        Threshold::Fixed(beta) => (None, ThresholdResult::fixed(beta)),
        Threshold::Auto => {
            let fit = fit_gmm2(&curvatures.values, &config.gmm)?;
            let t = find_threshold(&fit);
            (Some(fit), t)
        }
    };
    let (graph, report) = match threshold.beta {
        Some(beta) => prune_at(g, &curvatures.values, beta),
        None => (g.clone(), unchanged(g)),
    };
    Ok(PreprocessOutcome {
        graph,
        curvatures,
        fit,
        threshold,
        report,
    })
}

/// Lower Ricci preprocessing with the automatic threshold.
pub fn preprocess_lrc(
    g: &Graph,
    gmm: &GmmConfig,
) -> Result<(Graph, GmmFit, ThresholdResult, PruneReport)> {
    let config = PreprocessConfig {
        gmm: *gmm,
        ..PreprocessConfig::default()
    };
    let out = preprocess(g, &config)?;
    let fit = out.fit.expect("automatic threshold always fits");
    Ok((out.graph, fit, out.threshold, out.report))
}
