//! Edge curvature toolkit for undirected graphs.
//!
//! The crate computes four discrete Ricci curvatures per edge (Forman,
//! balanced Forman, lower Ricci and exact Ollivier-Ricci), prunes low-curvature
//! edges using a two-component Gaussian mixture valley threshold, simulates
//! stochastic block models with the separation scores used to compare
//! curvatures, and evaluates community assignments (ARI, AMI, overlapping F1)
//! with a built-in label propagation baseline.
//!
//! Module map:
//! - [`graph`]: compressed adjacency graph, file formats, structural primitives.
//! - [`curvature`]: per-edge curvature values and the Ollivier bounds.
//! - [`transport`]: exact integral transportation solver used by ORC.
//! - [`preprocess`]: mixture fit, valley threshold and edge pruning.
//! - [`sbm`]: block model sampler, PPS/AER/AOP scores and the grid harness.
//! - [`metrics`]: partition agreement indices, cover F1 and label propagation.

pub mod curvature;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod numfmt;
pub mod preprocess;
pub mod rng;
pub mod sbm;
pub mod transport;

pub use curvature::{curvature_all, CurvatureKind, EdgeCurvatures};
pub use error::{Error, Result};
pub use graph::{Cover, Graph, NodeId, Partition};
pub use metrics::{ami, ari, lpa_detect, overlapping_f1, ContingencyTable, DetectionResult};
pub use preprocess::{
    find_threshold, fit_gmm2, preprocess, preprocess_lrc, GmmConfig, GmmFit, PreprocessConfig,
    PreprocessOutcome, PruneReport, Threshold, ThresholdMode, ThresholdResult,
};
pub use sbm::{run_grid, sample_sbm, GridRecord, GridSpec, ReplicateStats, SbmSpec, ScoreName};
