//! Fixtures shared by the criterion benches.

use vpcal_core::synth::scene::ManhattanScene;
use vpcal_core::synth::{
    derive_seed, sample_view, synthetic_panorama, Panorama, SampleRanges, View,
};

/// A GSV-style view of `size` x `size` pixels.
pub fn view(seed: u64, size: u32) -> View {
    sample_view(&SampleRanges::GSV, derive_seed(seed, 0), size, size).expect("GSV ranges are valid")
}

/// A noiseless Manhattan scene with `n` segments.
pub fn scene(seed: u64, n: usize) -> ManhattanScene {
    let v = view(seed, 512);
    ManhattanScene::generate(&v.camera, v.yaw_deg, n, seed)
}

/// The builtin room panorama at `width` pixels.
pub fn panorama(width: u32) -> Panorama {
    synthetic_panorama(width)
}

/// Deterministic pseudo-random errors in `[0, 0.4)`.
pub fn errors(n: usize) -> Vec<f64> {
    (0..n as u64)
        .map(|i| (derive_seed(3, i) % 4000) as f64 / 10_000.0)
        .collect()
}
