use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{CameraFrame, LineSegment};

use super::SynthError;

/// Default benchmark image size.
pub const DEFAULT_SIZE: u32 = 512;
/// Cap on the number of segments fed to labeling and the network.
pub const MAX_LINES: usize = 512;

/// Closed sampling interval in degrees; `lo == hi` pins the value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl Range {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    fn sample(&self, rng: &mut impl Rng) -> f64 {
        let u: f64 = rng.random();
        self.lo + (self.hi - self.lo) * u
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// FoV, pitch and roll ranges of a benchmark profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRanges {
    pub fov: Range,
    pub pitch: Range,
    pub roll: Range,
}

impl SampleRanges {
    /// Google Street View profile.
    pub const GSV: SampleRanges = SampleRanges {
        fov: Range::new(40.0, 80.0),
        pitch: Range::new(-30.0, 40.0),
        roll: Range::new(-20.0, 20.0),
    };

    /// SUN360 profile: wider FoV range.
    pub const SUN360: SampleRanges = SampleRanges {
        fov: Range::new(40.0, 90.0),
        pitch: Range::new(-30.0, 40.0),
        roll: Range::new(-20.0, 20.0),
    };

    pub fn profile(name: &str) -> Option<SampleRanges> {
        match name {
            "gsv" => Some(Self::GSV),
            "sun360" => Some(Self::SUN360),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let ok = |r: &Range, lo: f64, hi: f64| {
            r.lo.is_finite() && r.hi.is_finite() && r.lo <= r.hi && lo < r.lo && r.hi < hi
        };
        if !ok(&self.fov, 0.0, 180.0)
            || !ok(&self.pitch, -90.0, 90.0)
            || !ok(&self.roll, -90.0, 90.0)
        {
            return Err(SynthError::InvalidRange(*self));
        }
        Ok(())
    }
}

/// Camera plus heading of one synthesized view.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct View {
    pub camera: CameraFrame,
    pub yaw_deg: f64,
}

/// Uniform, independent FoV, pitch and roll for a 512x512 image.
pub fn sample_camera(r: &SampleRanges, seed: u64) -> Result<CameraFrame, SynthError> {
    sample_view(r, seed, DEFAULT_SIZE, DEFAULT_SIZE).map(|v| v.camera)
}

/// [`sample_camera`] at a given size, with a uniform yaw in `[0, 360)`.
///
/// The first three draws match [`sample_camera`] for the same seed.
pub fn sample_view(
    r: &SampleRanges,
    seed: u64,
    width: u32,
    height: u32,
) -> Result<View, SynthError> {
    r.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fov = r.fov.sample(&mut rng);
    let pitch = r.pitch.sample(&mut rng);
    let roll = r.roll.sample(&mut rng);
    let yaw = 360.0 * rng.random::<f64>();
    Ok(View {
        camera: CameraFrame::new(fov, pitch, roll, width, height)?,
        yaw_deg: yaw,
    })
}

/// Per-record seed, independent of processing order.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sorted indices of at most `max_n` lines, uniform without replacement.
pub fn sample_line_indices(n: usize, max_n: usize, seed: u64) -> Vec<usize> {
    if n <= max_n {
        return (0..n).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = rand::seq::index::sample(&mut rng, n, max_n).into_vec();
    idx.sort_unstable();
    idx
}

/// At most `max_n` lines, keeping their original order.
pub fn sample_lines(lines: &[LineSegment], max_n: usize, seed: u64) -> Vec<LineSegment> {
    sample_line_indices(lines.len(), max_n, seed)
        .into_iter()
        .map(|i| lines[i])
        .collect()
}
