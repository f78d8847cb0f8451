use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;

use image::{Rgb, RgbImage};
use nalgebra::{Rotation3, Vector3};

use crate::geometry::CameraFrame;

use super::SynthError;

/// Equirectangular panorama.
///
/// Column centers span longitude `[-π, π)` left to right, row centers span
/// latitude `π/2` (top) to `-π/2` (bottom).
#[derive(Clone, Debug, PartialEq)]
pub struct Panorama {
    pub pixels: RgbImage,
}

impl Panorama {
    pub fn new(pixels: RgbImage) -> Self {
        if pixels.width() != 2 * pixels.height() {
            log::warn!(
                "panorama is {}x{}, expected a 2:1 aspect ratio",
                pixels.width(),
                pixels.height()
            );
        }
        Self { pixels }
    }

    pub fn open(path: &Path) -> Result<Self, SynthError> {
        let img =
            image::open(path).map_err(|e| SynthError::Image(format!("{}: {e}", path.display())))?;
        Ok(Self::new(img.to_rgb8()))
    }

    pub fn width(&self) -> u32 {
        self.pixels.width()
    }

    pub fn height(&self) -> u32 {
        self.pixels.height()
    }

    /// Bilinear sample at `(lon, lat)`; longitude wraps, latitude clamps.
    pub fn sample(&self, lon: f64, lat: f64) -> [f64; 3] {
        let (w, h) = (self.width() as i64, self.height() as i64);
        let u = (lon + PI) / (2.0 * PI) * w as f64 - 0.5;
        let v = (FRAC_PI_2 - lat) / PI * h as f64 - 0.5;
        let (u0, v0) = (u.floor(), v.floor());
        let (fu, fv) = (u - u0, v - v0);
        let col = |c: i64| c.rem_euclid(w) as u32;
        let row = |r: i64| r.clamp(0, h - 1) as u32;
        let (c0, c1) = (col(u0 as i64), col(u0 as i64 + 1));
        let (r0, r1) = (row(v0 as i64), row(v0 as i64 + 1));
        let px = |c: u32, r: u32| self.pixels.get_pixel(c, r).0;
        let (a, b, c, d) = (px(c0, r0), px(c1, r0), px(c0, r1), px(c1, r1));
        let mut out = [0.0; 3];
        for k in 0..3 {
            let top = f64::from(a[k]) * (1.0 - fu) + f64::from(b[k]) * fu;
            let bottom = f64::from(c[k]) * (1.0 - fu) + f64::from(d[k]) * fu;
            out[k] = top * (1.0 - fv) + bottom * fv;
        }
        out
    }
}

/// Longitude and latitude of a world direction (x east, y down, z north).
pub fn ray_to_lonlat(r: &Vector3<f64>) -> (f64, f64) {
    let n = r.norm();
    (r.x.atan2(r.z), (-r.y / n).clamp(-1.0, 1.0).asin())
}

/// Unit world direction for a longitude and latitude.
pub fn lonlat_to_ray(lon: f64, lat: f64) -> Vector3<f64> {
    let (sl, cl) = lon.sin_cos();
    let (sp, cp) = lat.sin_cos();
    Vector3::new(cp * sl, -sp, cp * cl)
}

/// Maps output pixels to world rays for one view.
#[derive(Clone, Copy, Debug)]
pub struct ViewRays {
    camera_to_world: Rotation3<f64>,
    focal: f64,
    cx: f64,
    cy: f64,
}

impl ViewRays {
    pub fn new(c: &CameraFrame, yaw_deg: f64) -> Self {
        let center = c.center();
        Self {
            camera_to_world: c.world_to_camera(yaw_deg).inverse(),
            focal: c.focal_px(),
            cx: center.x,
            cy: center.y,
        }
    }

    /// Unit world ray through the image point `(x, y)`; pixel `(i, j)` has
    /// its center at `(i + 0.5, j + 0.5)`.
    pub fn ray(&self, x: f64, y: f64) -> Vector3<f64> {
        let d = Vector3::new((x - self.cx) / self.focal, (y - self.cy) / self.focal, 1.0);
        (self.camera_to_world * d).normalize()
    }
}

/// Perspective view of a panorama: every output pixel samples the panorama
/// bilinearly along its viewing ray.
pub fn rectify_equirect(p: &Panorama, c: &CameraFrame, yaw_deg: f64) -> RgbImage {
    let rays = ViewRays::new(c, yaw_deg);
    RgbImage::from_fn(c.width, c.height, |i, j| {
        let r = rays.ray(f64::from(i) + 0.5, f64::from(j) + 0.5);
        let (lon, lat) = ray_to_lonlat(&r);
        let s = p.sample(lon, lat);
        Rgb(s.map(|v| v.round().clamp(0.0, 255.0) as u8))
    })
}

/// Box-shaped room around the viewer with checkerboard faces, all in
/// meters in the y-down world frame. The viewer sits at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Room {
    pub x: (f64, f64),
    /// Ceiling (negative) and floor (positive) heights.
    pub y: (f64, f64),
    pub z: (f64, f64),
    pub cell: f64,
}

impl Default for Room {
    fn default() -> Self {
        Self {
            x: (-3.3, 5.1),
            y: (-1.4, 1.6),
            z: (-4.2, 6.5),
            cell: 0.7,
        }
    }
}

const FACE_COLORS: [[u8; 3]; 6] = [
    [200, 70, 60],
    [60, 150, 90],
    [220, 200, 120],
    [90, 90, 110],
    [70, 110, 200],
    [170, 110, 180],
];

impl Room {
    /// Face index and in-face coordinates of the first hit along `d`.
    fn hit(&self, d: &Vector3<f64>) -> (usize, f64, f64) {
        let mut best = (f64::INFINITY, 0usize);
        let bounds = [self.x, self.y, self.z];
        for axis in 0..3 {
            let (lo, hi) = bounds[axis];
            let da = d[axis];
            if da > 0.0 {
                let t = hi / da;
                if t < best.0 {
                    best = (t, 2 * axis + 1);
                }
            } else if da < 0.0 {
                let t = lo / da;
                if t < best.0 {
                    best = (t, 2 * axis);
                }
            }
        }
        let (t, face) = best;
        let p = d * t;
        let (a, b) = match face / 2 {
            0 => (p.y, p.z),
            1 => (p.x, p.z),
            _ => (p.x, p.y),
        };
        (face, a, b)
    }

    fn shade(&self, d: &Vector3<f64>) -> [f64; 3] {
        let (face, a, b) = self.hit(d);
        let parity = ((a / self.cell).floor() + (b / self.cell).floor()).rem_euclid(2.0);
        let k = if parity < 0.5 { 1.0 } else { 0.45 };
        FACE_COLORS[face].map(|c| f64::from(c) * k)
    }

    /// Renders the room as an equirectangular panorama with 2x2 supersampling.
    pub fn render(&self, width: u32, height: u32) -> Panorama {
        let pixels = RgbImage::from_fn(width, height, |u, v| {
            let mut acc = [0.0; 3];
            for (du, dv) in [(0.25, 0.25), (0.75, 0.25), (0.25, 0.75), (0.75, 0.75)] {
                let lon = (f64::from(u) + du) / f64::from(width) * 2.0 * PI - PI;
                let lat = FRAC_PI_2 - (f64::from(v) + dv) / f64::from(height) * PI;
                let c = self.shade(&lonlat_to_ray(lon, lat));
                for k in 0..3 {
                    acc[k] += c[k] / 4.0;
                }
            }
            Rgb(acc.map(|v| v.round() as u8))
        });
        Panorama::new(pixels)
    }

    /// Checkerboard and face boundaries as 3D segments.
    pub fn edges(&self) -> Vec<(Vector3<f64>, Vector3<f64>)> {
        let grid = |(lo, hi): (f64, f64)| {
            let mut v = vec![lo];
            let mut k = (lo / self.cell).floor() + 1.0;
            while k * self.cell < hi - 1e-9 {
                if k * self.cell > lo + 1e-9 {
                    v.push(k * self.cell);
                }
                k += 1.0;
            }
            v.push(hi);
            v
        };
        let bounds = [self.x, self.y, self.z];
        let mut out = Vec::new();
        for axis in 0..3 {
            let (a1, a2) = ((axis + 1) % 3, (axis + 2) % 3);
            for plane in [bounds[axis].0, bounds[axis].1] {
                let point = |u: f64, v: f64| {
                    let mut p = Vector3::zeros();
                    p[axis] = plane;
                    p[a1] = u;
                    p[a2] = v;
                    p
                };
                let (r1, r2) = (bounds[a1], bounds[a2]);
                for u in grid(r1) {
                    out.push((point(u, r2.0), point(u, r2.1)));
                }
                for v in grid(r2) {
                    out.push((point(r1.0, v), point(r1.1, v)));
                }
            }
        }
        out
    }
}

/// Built-in synthetic panorama used when no real panorama is supplied.
pub fn synthetic_panorama(width: u32) -> Panorama {
    Room::default().render(width, width / 2)
}

/// Writes an image atomically as PNG, with optional `tEXt` key/value pairs.
pub fn save_png(img: &RgbImage, path: &Path, text: &[(&str, &str)]) -> Result<(), SynthError> {
    let err = |e: png::EncodingError| SynthError::Image(format!("{}: {e}", path.display()));
    let mut buf = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut buf, img.width(), img.height());
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        for (k, v) in text {
            enc.add_text_chunk((*k).to_string(), (*v).to_string())
                .map_err(err)?;
        }
        let mut w = enc.write_header().map_err(err)?;
        w.write_image_data(img.as_raw()).map_err(err)?;
    }
    super::write_atomic(path, &buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    /// Panorama whose red channel encodes longitude and green latitude.
    fn gradient_panorama(w: u32) -> Panorama {
        Panorama::new(RgbImage::from_fn(w, w / 2, |u, v| {
            Rgb([(u * 255 / (w - 1)) as u8, (v * 255 / (w / 2 - 1)) as u8, 0])
        }))
    }

    #[test]
    fn center_ray_points_at_yaw_and_pitch() {
        let c = CameraFrame::new(60.0, 17.0, 8.0, 513, 513).unwrap();
        let rays = ViewRays::new(&c, 40.0);
        let (lon, lat) = ray_to_lonlat(&rays.ray(256.5, 256.5));
        assert_abs_diff_eq!(lon, 40f64.to_radians(), epsilon = 1e-12);
        assert_abs_diff_eq!(lat, 17f64.to_radians(), epsilon = 1e-12);
    }

    #[test]
    fn level_center_pixel_samples_panorama_center() {
        let p = gradient_panorama(720);
        let c = CameraFrame::new(60.0, 0.0, 0.0, 33, 33).unwrap();
        let img = rectify_equirect(&p, &c, 0.0);
        let want = p.sample(0.0, 0.0);
        let got = img.get_pixel(16, 16).0;
        for k in 0..3 {
            assert!((f64::from(got[k]) - want[k]).abs() <= 0.5);
        }
        assert!((f64::from(got[0]) - 127.5).abs() < 1.5);
    }

    #[test]
    fn roll_half_turn_flips_image() {
        let p = synthetic_panorama(512);
        let a = CameraFrame::new(70.0, 10.0, 0.0, 64, 48).unwrap();
        let b = CameraFrame {
            roll_deg: 180.0,
            ..a
        };
        let ia = rectify_equirect(&p, &a, 30.0);
        let ib = rectify_equirect(&p, &b, 30.0);
        let mut mismatched = 0;
        for j in 0..48 {
            for i in 0..64 {
                let pa = ia.get_pixel(i, j).0;
                let pb = ib.get_pixel(63 - i, 47 - j).0;
                if pa.iter().zip(pb.iter()).any(|(x, y)| x.abs_diff(*y) > 1) {
                    mismatched += 1;
                }
            }
        }
        assert_eq!(mismatched, 0);
        // top row of one is the bottom row of the other, not itself
        assert_ne!(ia.get_pixel(10, 0), ia.get_pixel(10, 47));
    }

    #[test]
    fn edges_cover_every_face() {
        let r = Room::default();
        let e = r.edges();
        assert!(!e.is_empty());
        for (a, b) in &e {
            let d = b - a;
            // axis aligned
            assert_eq!(d.iter().filter(|c| c.abs() > 0.0).count(), 1);
        }
    }

    proptest! {
        #[test]
        fn pixel_ray_lonlat_round_trip(
            x in 0.0..512.0f64, y in 0.0..512.0f64,
            fov in 40.0..90.0f64, pitch in -30.0..40.0f64, roll in -20.0..20.0f64, yaw in 0.0..360.0f64,
        ) {
            let c = CameraFrame::new(fov, pitch, roll, 512, 512).unwrap();
            let r = ViewRays::new(&c, yaw).ray(x, y);
            let (lon, lat) = ray_to_lonlat(&r);
            prop_assert!((lonlat_to_ray(lon, lat) - r).norm() < 1e-9);
        }
    }
}
