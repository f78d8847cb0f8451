use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use vpcal_core::labeling::Thresholds;
use vpcal_core::synth::SampleRanges;

use crate::CliError;

/// Hex sha256 of the canonical JSON form of a config.
pub fn config_hash<T: Serialize>(config: &T) -> String {
    let bytes = serde_json::to_vec(config).expect("configs serialize");
    hex::encode(Sha256::digest(&bytes))
}

pub fn file_digest(path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Where the panoramas come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PanoramaSource {
    /// The procedural checkerboard room at the given width.
    Builtin { width: u32 },
    /// A panorama file, identified by content.
    File { path: String, sha256: String },
}

/// Everything that determines the output of `vpcal synth`, apart from the
/// output directory and the worker count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub command: String,
    pub profile: String,
    pub ranges: SampleRanges,
    pub seed: u64,
    pub num: usize,
    pub size: u32,
    pub panorama: PanoramaSource,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelConfig {
    pub command: String,
    /// Hash of the synthesis config of the labeled manifest.
    pub manifest_hash: String,
    pub seed: u64,
    pub count: usize,
    pub max_lines: usize,
    pub thresholds: Thresholds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub command: String,
    pub manifest_hash: String,
    pub predictions_sha256: String,
    pub auc_max: f64,
    pub force: bool,
}

/// A config together with its hash, as written next to the outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Echo<T> {
    pub config_hash: String,
    pub config: T,
}

impl<T: Serialize> Echo<T> {
    pub fn new(config: T) -> Self {
        Self {
            config_hash: config_hash(&config),
            config,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("configs serialize");
        s.push('\n');
        s
    }
}
