use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use super::{image_center, GeometryError, HomLine, HomPoint, LineSegment};

/// Centered, isotropically scaled image coordinates.
///
/// Pixel `(x, y)` maps to `((x - w/2) s, (y - h/2) s)` with `s = 2 / min(w, h)`,
/// so the shorter image side spans `[-1, 1]`. Angular thresholds on
/// [`point_line_distance`](super::point_line_distance) are evaluated in this
/// frame; in raw pixel coordinates the homogeneous third component is
/// negligible and the measure loses its meaning.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageFrame {
    pub width: u32,
    pub height: u32,
}

impl ImageFrame {
    pub fn new(width: u32, height: u32) -> Result<Self, GeometryError> {
        if width == 0 || height == 0 {
            return Err(GeometryError::InvalidImageSize { width, height });
        }
        Ok(Self { width, height })
    }

    pub fn scale(&self) -> f64 {
        2.0 / f64::from(self.width.min(self.height))
    }

    fn normalizing_matrix(&self) -> Matrix3<f64> {
        let s = self.scale();
        let c = image_center(self.width, self.height);
        Matrix3::new(s, 0.0, -s * c.x, 0.0, s, -s * c.y, 0.0, 0.0, 1.0)
    }

    fn pixel_matrix(&self) -> Matrix3<f64> {
        let s = self.scale();
        let c = image_center(self.width, self.height);
        Matrix3::new(1.0 / s, 0.0, c.x, 0.0, 1.0 / s, c.y, 0.0, 0.0, 1.0)
    }

    pub fn normalize_point(&self, p: &HomPoint) -> HomPoint {
        HomPoint::from_vector(self.normalizing_matrix() * p.coords()).expect("invertible map")
    }

    pub fn denormalize_point(&self, p: &HomPoint) -> HomPoint {
        HomPoint::from_vector(self.pixel_matrix() * p.coords()).expect("invertible map")
    }

    /// Lines map with the inverse transpose.
    pub fn normalize_line(&self, l: &HomLine) -> HomLine {
        HomLine::from_vector(self.pixel_matrix().transpose() * l.coords()).expect("invertible map")
    }

    pub fn denormalize_line(&self, l: &HomLine) -> HomLine {
        HomLine::from_vector(self.normalizing_matrix().transpose() * l.coords())
            .expect("invertible map")
    }

    pub fn normalize_segment(&self, s: &LineSegment) -> LineSegment {
        let k = self.scale();
        let c = image_center(self.width, self.height);
        LineSegment {
            p0: (s.p0 - c) * k,
            p1: (s.p1 - c) * k,
        }
    }
}
