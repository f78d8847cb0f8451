use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geometry::{camera_to_calib, CalibGT, CameraFrame};

use super::SynthError;

/// One benchmark image and its ground truth. Paths are relative to the
/// manifest directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneRecord {
    pub index: usize,
    pub id: String,
    pub image: String,
    pub lines: String,
    pub labels: String,
    pub pseudo_vps: String,
    pub seed: u64,
    pub yaw_deg: f64,
    pub camera: CameraFrame,
    pub calib: CalibGT,
    /// Axis the FoV is measured along; always `"vertical"`.
    pub fov_axis: String,
    pub config_hash: String,
}

impl SceneRecord {
    /// Checks that the stored ground truth matches the camera.
    pub fn validate(&self) -> Result<(), SynthError> {
        let g = camera_to_calib(&self.camera)?;
        let tol = crate::geometry::HOM_EQ_TOL;
        let same = g.zenith.approx_eq(&self.calib.zenith, tol)
            && g.horizon.approx_eq(&self.calib.horizon, tol)
            && g.fov_deg == self.calib.fov_deg
            && (g.width, g.height) == (self.calib.width, self.calib.height);
        if same {
            Ok(())
        } else {
            Err(SynthError::Inconsistent(self.id.clone()))
        }
    }
}

/// Reads a JSON-lines manifest.
pub fn read_manifest(path: &Path) -> Result<Vec<SceneRecord>, SynthError> {
    let file = std::fs::File::open(path)
        .map_err(|e| SynthError::Io(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (n, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| SynthError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: SceneRecord = serde_json::from_str(&line).map_err(|e| SynthError::Parse {
            row: n + 1,
            content: e.to_string(),
        })?;
        out.push(rec);
    }
    Ok(out)
}

pub fn manifest_string(records: &[SceneRecord]) -> String {
    let mut s = String::new();
    for r in records {
        s.push_str(&serde_json::to_string(r).expect("records serialize"));
        s.push('\n');
    }
    s
}

/// Writes through a temporary sibling file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), SynthError> {
    let io = |e: std::io::Error| SynthError::Io(format!("{}: {e}", path.display()));
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    std::fs::write(&tmp, bytes).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}
