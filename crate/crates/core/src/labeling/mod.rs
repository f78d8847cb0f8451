//! Convergence-line labels and pseudo horizontal vanishing points.
//!
//! Labels compare the angular point-line distance of each line to a VP
//! against two thresholds; lines in the band between them are ignored by
//! the classification losses. Horizontal VPs are estimated from line-pair
//! intersections close to a known horizon, ranked by the summed length of
//! the segments that pass near them.

mod label;
mod pseudo_vp;

pub use label::{
    label_from_distance, label_line, label_segments, label_set, LabelSet, LineLabel, Thresholds,
};
pub use pseudo_vp::{
    consensus_mass, filter_horizon_candidates, pseudo_vp_pipeline, select_pseudo_vps,
    vp_candidates, PartialVp, PseudoVPs, DEFAULT_CANDIDATE_COUNT, NEAR_PARALLEL_EPS,
};

use thiserror::Error;

use crate::geometry::GeometryError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabelError {
    #[error("no usable line pair to build VP candidates")]
    NoCandidates,
    #[error("not enough line structure for two horizontal VPs")]
    InsufficientStructure { partial: Option<Box<PartialVp>> },
    #[error("thresholds must satisfy 0 < delta0 < delta < delta1 < 1, got {0:?}")]
    InvalidThresholds(Thresholds),
    #[error("invalid label value {0}")]
    InvalidLabel(i64),
    #[error("label file row {row}: cannot parse {content:?}")]
    Parse { row: usize, content: String },
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
