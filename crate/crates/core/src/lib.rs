//! Single-view camera calibration toolkit.
//!
//! The crate is organized around four areas:
//!
//! - [`geometry`]: homogeneous points and lines, line features and the pinhole
//!   camera model mapping (FoV, pitch, roll) to (zenith VP, horizon line, FoV).
//! - [`labeling`]: ternary convergence-line labels and the pseudo horizontal
//!   vanishing point estimator driven by a known horizon.
//! - [`metrics`]: the training losses and the benchmark metrics (angle errors,
//!   horizon error, AUC of the cumulative error distribution).
//! - [`synth`]: benchmark synthesis from equirectangular panoramas, LSD output
//!   ingestion and procedural Manhattan scenes.

pub mod geometry;
pub mod labeling;
pub mod metrics;
pub mod synth;

pub use geometry::{
    calib_to_camera, camera_to_calib, focal_fov, fov_focal, horizon_boundary_points, line_feature,
    line_from_endpoints, point_line_distance, up_direction_from_zenith, CalibGT, CameraFrame,
    GeometryError, HomLine, HomPoint, ImageFrame, LineFeature, LineSegment,
};
pub use labeling::{
    consensus_mass, filter_horizon_candidates, label_line, label_set, pseudo_vp_pipeline,
    select_pseudo_vps, vp_candidates, LabelError, LabelSet, LineLabel, PseudoVPs, Thresholds,
};
pub use metrics::{
    angle_errors, auc_cumulative, horizon_error, loss_bce, loss_fov, loss_horizon, loss_zenith,
    total_loss, AngleErrors, BceLoss, EvalRecord, EvalReport, HorizonError, LossBreakdown,
    MetricsError,
};
pub use synth::{
    ingest_lsd, rectify_equirect, sample_camera, sample_lines, Panorama, SampleRanges, SceneRecord,
    SynthError,
};
