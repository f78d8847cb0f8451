//! Procedural Manhattan scenes with exact line segments.

use nalgebra::{Rotation3, Vector2, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{CameraFrame, HomPoint, LineSegment};

use super::Room;

/// Segments whose projection is shorter than this (pixels) are discarded.
pub const MIN_SEGMENT_PX: f64 = 8.0;
const NEAR_PLANE: f64 = 1e-2;

/// World direction family of a segment: `Vertical` is the world y axis,
/// `X` and `Z` are the two horizontal Manhattan axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Vertical,
    X,
    Z,
}

impl Family {
    pub fn direction(self) -> Vector3<f64> {
        match self {
            Family::X => Vector3::x(),
            Family::Vertical => Vector3::y(),
            Family::Z => Vector3::z(),
        }
    }
}

/// Projects world points into a view.
#[derive(Clone, Copy, Debug)]
pub struct Projector {
    world_to_camera: Rotation3<f64>,
    focal: f64,
    center: Vector2<f64>,
    width: f64,
    height: f64,
}

impl Projector {
    pub fn new(c: &CameraFrame, yaw_deg: f64) -> Self {
        Self {
            world_to_camera: c.world_to_camera(yaw_deg),
            focal: c.focal_px(),
            center: c.center(),
            width: f64::from(c.width),
            height: f64::from(c.height),
        }
    }

    pub fn to_camera(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.world_to_camera * p
    }

    fn project_camera(&self, p: &Vector3<f64>) -> Vector2<f64> {
        Vector2::new(p.x / p.z, p.y / p.z) * self.focal + self.center
    }

    /// Vanishing point of a world direction, in pixels.
    pub fn vanishing_point(&self, dir: &Vector3<f64>) -> HomPoint {
        let d = self.world_to_camera * dir;
        HomPoint::new(
            self.focal * d.x + self.center.x * d.z,
            self.focal * d.y + self.center.y * d.z,
            d.z,
        )
        .expect("rotation of a nonzero direction")
    }

    /// Image of a 3D segment clipped to the near plane and the image
    /// rectangle, `None` when nothing long enough remains.
    pub fn project_segment(&self, a: &Vector3<f64>, b: &Vector3<f64>) -> Option<LineSegment> {
        let (mut ca, mut cb) = (self.to_camera(a), self.to_camera(b));
        if ca.z < NEAR_PLANE && cb.z < NEAR_PLANE {
            return None;
        }
        if ca.z < NEAR_PLANE {
            ca = cb + (ca - cb) * ((cb.z - NEAR_PLANE) / (cb.z - ca.z));
        } else if cb.z < NEAR_PLANE {
            cb = ca + (cb - ca) * ((ca.z - NEAR_PLANE) / (ca.z - cb.z));
        }
        let (p, q) = clip_to_rect(
            self.project_camera(&ca),
            self.project_camera(&cb),
            self.width,
            self.height,
        )?;
        if (q - p).norm() < MIN_SEGMENT_PX {
            return None;
        }
        LineSegment::new(p, q).ok()
    }
}

/// Liang-Barsky clipping against `[0, w] x [0, h]`.
pub fn clip_to_rect(
    p: Vector2<f64>,
    q: Vector2<f64>,
    w: f64,
    h: f64,
) -> Option<(Vector2<f64>, Vector2<f64>)> {
    let d = q - p;
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (den, num) in [(-d.x, p.x), (d.x, w - p.x), (-d.y, p.y), (d.y, h - p.y)] {
        if den == 0.0 {
            if num < 0.0 {
                return None;
            }
        } else {
            let t = num / den;
            if den < 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
        }
    }
    (t0 < t1).then(|| (p + d * t0, p + d * t1))
}

/// Noiseless segments of a Manhattan scene with known vanishing points.
#[derive(Clone, Debug)]
pub struct ManhattanScene {
    pub camera: CameraFrame,
    pub yaw_deg: f64,
    pub segments: Vec<LineSegment>,
    pub families: Vec<Family>,
    pub zenith: HomPoint,
    /// VPs of the X and Z world axes.
    pub horizontal_vps: [HomPoint; 2],
}

impl ManhattanScene {
    /// Random 3D segments along the three Manhattan axes, balanced across
    /// families and visible in the view.
    pub fn generate(camera: &CameraFrame, yaw_deg: f64, n: usize, seed: u64) -> Self {
        Self::generate_families(
            camera,
            yaw_deg,
            n,
            seed,
            &[Family::Vertical, Family::X, Family::Z],
        )
    }

    /// Like [`ManhattanScene::generate`], cycling through `fams` only.
    pub fn generate_families(
        camera: &CameraFrame,
        yaw_deg: f64,
        n: usize,
        seed: u64,
        fams: &[Family],
    ) -> Self {
        assert!(!fams.is_empty(), "at least one family");
        let proj = Projector::new(camera, yaw_deg);
        let to_world = proj.world_to_camera.inverse();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (w, h) = (f64::from(camera.width), f64::from(camera.height));
        let f = camera.focal_px();
        let c = camera.center();

        let mut segments = Vec::with_capacity(n);
        let mut families = Vec::with_capacity(n);
        let mut attempts = 0;
        while segments.len() < n && attempts < 1000 * n.max(1) {
            attempts += 1;
            let fam = fams[segments.len() % fams.len()];
            let u = rng.random_range(0.0..w);
            let v = rng.random_range(0.0..h);
            let depth = rng.random_range(2.0..20.0);
            let ray = Vector3::new((u - c.x) / f, (v - c.y) / f, 1.0);
            let mid = to_world * (ray * depth);
            let half = 0.5 * rng.random_range(0.5..4.0) * depth / 6.0;
            let dir = fam.direction();
            if let Some(s) = proj.project_segment(&(mid - dir * half), &(mid + dir * half)) {
                if s.length() >= 2.0 * MIN_SEGMENT_PX {
                    segments.push(s);
                    families.push(fam);
                }
            }
        }
        Self {
            camera: *camera,
            yaw_deg,
            segments,
            families,
            zenith: proj.vanishing_point(&Family::Vertical.direction()),
            horizontal_vps: [
                proj.vanishing_point(&Family::X.direction()),
                proj.vanishing_point(&Family::Z.direction()),
            ],
        }
    }
}

/// Room edges visible in a view, as exact image segments.
pub fn room_segments(room: &Room, camera: &CameraFrame, yaw_deg: f64) -> Vec<LineSegment> {
    let proj = Projector::new(camera, yaw_deg);
    room.edges()
        .iter()
        .filter_map(|(a, b)| proj.project_segment(a, b))
        .collect()
}
