use nalgebra::{Matrix3, Rotation3, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use super::{point_line_distance, GeometryError, HomLine, HomPoint};

/// Pinhole camera pose relative to gravity.
///
/// Conventions: principal point at the image center, square pixels, y axis
/// pointing down, vertical field of view. Positive pitch tilts the camera
/// up (the horizon moves below the image center); positive roll rotates the
/// horizon clockwise on screen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CameraFrame {
    pub fov_deg: f64,
    pub pitch_deg: f64,
    pub roll_deg: f64,
    pub width: u32,
    pub height: u32,
}

/// Calibration targets: zenith VP, horizon line and FoV, in pixel coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibGT {
    pub zenith: HomPoint,
    pub horizon: HomLine,
    pub fov_deg: f64,
    pub width: u32,
    pub height: u32,
}

fn check_fov(fov_deg: f64) -> Result<(), GeometryError> {
    if fov_deg.is_finite() && fov_deg > 0.0 && fov_deg < 180.0 {
        Ok(())
    } else {
        Err(GeometryError::InvalidFov(fov_deg))
    }
}

fn check_size(width: u32, height: u32) -> Result<(), GeometryError> {
    if width == 0 || height == 0 {
        Err(GeometryError::InvalidImageSize { width, height })
    } else {
        Ok(())
    }
}

impl CameraFrame {
    pub fn new(
        fov_deg: f64,
        pitch_deg: f64,
        roll_deg: f64,
        width: u32,
        height: u32,
    ) -> Result<Self, GeometryError> {
        check_fov(fov_deg)?;
        check_size(width, height)?;
        if !(pitch_deg.is_finite() && roll_deg.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        Ok(Self {
            fov_deg,
            pitch_deg,
            roll_deg,
            width,
            height,
        })
    }

    pub fn focal_px(&self) -> f64 {
        (f64::from(self.height) / 2.0) / (self.fov_deg.to_radians() / 2.0).tan()
    }

    pub fn center(&self) -> Vector2<f64> {
        image_center(self.width, self.height)
    }

    pub fn intrinsics(&self) -> Matrix3<f64> {
        intrinsics(self.focal_px(), self.center())
    }

    /// World-to-camera rotation for a given heading.
    ///
    /// The world frame is x east, y down, z north; the camera frame is
    /// x right, y down, z forward. A heading of `yaw_deg` looks towards
    /// longitude `yaw_deg`.
    pub fn world_to_camera(&self, yaw_deg: f64) -> Rotation3<f64> {
        let roll = Rotation3::from_axis_angle(&Vector3::z_axis(), self.roll_deg.to_radians());
        let pitch = Rotation3::from_axis_angle(&Vector3::x_axis(), -self.pitch_deg.to_radians());
        let yaw = Rotation3::from_axis_angle(&Vector3::y_axis(), -yaw_deg.to_radians());
        roll * pitch * yaw
    }

    /// Unit world-up direction expressed in camera coordinates.
    pub fn up_in_camera(&self) -> Vector3<f64> {
        let (sp, cp) = self.pitch_deg.to_radians().sin_cos();
        let (sr, cr) = self.roll_deg.to_radians().sin_cos();
        Vector3::new(sr * cp, -cr * cp, sp)
    }
}

impl CalibGT {
    pub fn focal_px(&self) -> Result<f64, GeometryError> {
        fov_focal(self.fov_deg, self.height)
    }

    pub fn center(&self) -> Vector2<f64> {
        image_center(self.width, self.height)
    }
}

pub(crate) fn image_center(width: u32, height: u32) -> Vector2<f64> {
    Vector2::new(f64::from(width) / 2.0, f64::from(height) / 2.0)
}

pub(crate) fn intrinsics(focal: f64, center: Vector2<f64>) -> Matrix3<f64> {
    Matrix3::new(focal, 0.0, center.x, 0.0, focal, center.y, 0.0, 0.0, 1.0)
}

pub(crate) fn intrinsics_inv(focal: f64, center: Vector2<f64>) -> Matrix3<f64> {
    Matrix3::new(
        1.0 / focal,
        0.0,
        -center.x / focal,
        0.0,
        1.0 / focal,
        -center.y / focal,
        0.0,
        0.0,
        1.0,
    )
}

/// Focal length in pixels for a vertical FoV: `(height / 2) / tan(fov / 2)`.
pub fn fov_focal(fov_deg: f64, height: u32) -> Result<f64, GeometryError> {
    check_fov(fov_deg)?;
    check_size(1, height)?;
    Ok((f64::from(height) / 2.0) / (fov_deg.to_radians() / 2.0).tan())
}

/// Inverse of [`fov_focal`].
pub fn focal_fov(focal: f64, height: u32) -> Result<f64, GeometryError> {
    if !(focal.is_finite() && focal > 0.0) {
        return Err(GeometryError::InvalidFocal(focal));
    }
    check_size(1, height)?;
    Ok(2.0 * (f64::from(height) / 2.0 / focal).atan().to_degrees())
}

/// Zenith `K u` and horizon `K⁻ᵀ u` for the camera-frame up vector `u`.
pub fn camera_to_calib(c: &CameraFrame) -> Result<CalibGT, GeometryError> {
    check_fov(c.fov_deg)?;
    check_size(c.width, c.height)?;
    if !c.pitch_deg.is_finite() || c.pitch_deg.abs() >= 90.0 {
        return Err(GeometryError::UnsupportedPose(c.pitch_deg));
    }
    let f = c.focal_px();
    let center = c.center();
    let up = c.up_in_camera();
    let zenith = HomPoint::from_vector(intrinsics(f, center) * up)?;
    let horizon = HomLine::from_vector(intrinsics_inv(f, center).transpose() * up)?;
    Ok(CalibGT {
        zenith,
        horizon,
        fov_deg: c.fov_deg,
        width: c.width,
        height: c.height,
    })
}

/// Recovers pitch and roll from the zenith.
///
/// Up and its negation give the same zenith and horizon, so the pose is
/// resolved assuming `|roll| < 90°`.
pub fn calib_to_camera(g: &CalibGT) -> Result<CameraFrame, GeometryError> {
    let f = g.focal_px()?;
    check_size(g.width, g.height)?;
    if point_line_distance(&g.horizon, &g.zenith) <= 1e-12 {
        return Err(GeometryError::DegeneratePose);
    }
    let up = up_direction_from_zenith(&g.zenith, f, g.center())?;
    let pitch = up.z.clamp(-1.0, 1.0).asin().to_degrees();
    if !pitch.is_finite() || pitch.abs() >= 90.0 {
        return Err(GeometryError::UnsupportedPose(pitch));
    }
    let roll = up.x.atan2(-up.y).to_degrees();
    CameraFrame::new(g.fov_deg, pitch, roll, g.width, g.height)
}

/// Unit ray `K⁻¹ z`, signed so that it points up on screen (y ≤ 0).
pub fn up_direction_from_zenith(
    z: &HomPoint,
    focal: f64,
    center: Vector2<f64>,
) -> Result<Vector3<f64>, GeometryError> {
    if !(focal.is_finite() && focal > 0.0) {
        return Err(GeometryError::InvalidFocal(focal));
    }
    let d = (intrinsics_inv(focal, center) * z.coords()).normalize();
    if d.y > 0.0 || (d.y == 0.0 && d.z < 0.0) {
        Ok(-d)
    } else {
        Ok(d)
    }
}

/// Intersections of a horizon line with the left (`x = 0`) and right
/// (`x = width`) image borders, as `(x, y)` pixels.
pub fn horizon_boundary_points(
    h: &HomLine,
    width: u32,
) -> Result<(Vector2<f64>, Vector2<f64>), GeometryError> {
    if h.is_vertical() {
        return Err(GeometryError::VerticalHorizon);
    }
    let [a, b, c] = h.to_array();
    let w = f64::from(width);
    Ok((Vector2::new(0.0, -c / b), Vector2::new(w, -(a * w + c) / b)))
}
