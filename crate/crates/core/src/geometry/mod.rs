//! Homogeneous projective primitives and the pinhole camera model.

mod camera;
mod frame;
mod hom;

pub(crate) use camera::image_center;
pub use camera::{
    calib_to_camera, camera_to_calib, focal_fov, fov_focal, horizon_boundary_points,
    up_direction_from_zenith, CalibGT, CameraFrame,
};
pub use frame::ImageFrame;
pub use hom::{
    line_feature, line_from_endpoints, point_line_distance, HomLine, HomPoint, LineFeature,
    LineSegment, HOM_EQ_TOL,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("homogeneous vector is zero")]
    ZeroVector,
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("lines coincide, intersection undefined")]
    CoincidentLines,
    #[error("field of view {0}° outside (0, 180)")]
    InvalidFov(f64),
    #[error("focal length {0} must be positive")]
    InvalidFocal(f64),
    #[error("invalid image size {width}x{height}")]
    InvalidImageSize { width: u32, height: u32 },
    #[error("pitch {0}° unsupported, need |pitch| < 90°")]
    UnsupportedPose(f64),
    #[error("zenith lies on the horizon line")]
    DegeneratePose,
    #[error("horizon is vertical and does not cross the left/right image borders")]
    VerticalHorizon,
}
