//! Benchmark synthesis: camera sampling, panorama rectification, LSD
//! ingestion and procedural Manhattan scenes.

mod lsd;
mod panorama;
mod record;
mod sampling;
pub mod scene;

pub use lsd::{format_lsd, ingest_lsd, parse_lsd, LsdSegments};
pub use panorama::{
    lonlat_to_ray, ray_to_lonlat, rectify_equirect, save_png, synthetic_panorama, Panorama, Room,
    ViewRays,
};
pub use record::{manifest_string, read_manifest, write_atomic, SceneRecord};
pub use sampling::{
    derive_seed, sample_camera, sample_line_indices, sample_lines, sample_view, Range,
    SampleRanges, View, DEFAULT_SIZE, MAX_LINES,
};

use thiserror::Error;

use crate::geometry::GeometryError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("invalid sampling ranges {0:?}")]
    InvalidRange(SampleRanges),
    #[error("row {row}: cannot parse {content:?}")]
    Parse { row: usize, content: String },
    #[error("i/o: {0}")]
    Io(String),
    #[error("image: {0}")]
    Image(String),
    #[error("record {0}: ground truth does not match its camera")]
    Inconsistent(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
