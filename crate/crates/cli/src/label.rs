use std::path::Path;

use rayon::prelude::*;
use rayon::ThreadPool;
use serde::{Deserialize, Serialize};
use vpcal_core::labeling::{label_segments, pseudo_vp_pipeline, LabelError, Thresholds};
use vpcal_core::synth::{
    derive_seed, ingest_lsd, read_manifest, sample_line_indices, write_atomic, SceneRecord,
    MAX_LINES,
};
use vpcal_core::{HomPoint, ImageFrame, LineSegment};

use crate::config::{Echo, LabelConfig};
use crate::{files, report_record_errors, CliError, LabelArgs};

/// Pseudo horizontal VPs of one image as written to `pseudo_vps/<id>.json`.
///
/// VPs are in pixel coordinates, scaled to unit length. Support indices
/// refer to rows of the image's line file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VpFile {
    pub config_hash: String,
    /// `false` when the second consensus round found no support; `v1` is
    /// then absent and horizontal labels use `v0` alone.
    pub complete: bool,
    pub v0: [f64; 3],
    pub v1: Option<[f64; 3]>,
    pub support0: Vec<usize>,
    pub support1: Vec<usize>,
    pub mass0: f64,
    pub mass1: f64,
}

fn thresholds(a: &LabelArgs) -> Result<Thresholds, CliError> {
    let d = Thresholds::default();
    Ok(Thresholds::new(
        a.delta0.unwrap_or(d.delta0),
        a.delta1.unwrap_or(d.delta1),
        a.delta.unwrap_or(d.delta),
    )?)
}

/// Hash shared by all records of a manifest.
pub(crate) fn manifest_hash(records: &[SceneRecord], path: &Path) -> Result<String, CliError> {
    let first = records
        .first()
        .map(|r| r.config_hash.clone())
        .unwrap_or_default();
    if let Some(r) = records.iter().find(|r| r.config_hash != first) {
        return Err(CliError::Data(format!(
            "{}: record {} has config hash {}, expected {first}",
            path.display(),
            r.id,
            r.config_hash
        )));
    }
    Ok(first)
}

pub(crate) fn run(a: &LabelArgs, pool: &ThreadPool) -> Result<(), CliError> {
    let t = thresholds(a)?;
    if a.count == 0 {
        return Err(CliError::Config("--count must be at least 1".into()));
    }
    let records = read_manifest(&a.manifest)?;
    let dir = a.manifest.parent().unwrap_or(Path::new("."));
    let echo = Echo::new(LabelConfig {
        command: "label".into(),
        manifest_hash: manifest_hash(&records, &a.manifest)?,
        seed: a.seed,
        count: a.count,
        max_lines: MAX_LINES,
        thresholds: t,
    });

    let results: Vec<Result<(), CliError>> = pool.install(|| {
        records
            .par_iter()
            .map(|r| label_one(r, &echo, dir))
            .collect()
    });
    let errors = records
        .iter()
        .zip(results)
        .filter_map(|(r, res)| res.err().map(|e| (r.id.clone(), e)))
        .collect();
    write_atomic(&dir.join(files::LABEL_CONFIG), echo.to_json().as_bytes())?;
    report_record_errors(dir, errors)
}

fn label_one(rec: &SceneRecord, echo: &Echo<LabelConfig>, dir: &Path) -> Result<(), CliError> {
    rec.validate()?;
    let cfg = &echo.config;
    let lines_path = dir.join(&rec.lines);
    if !lines_path.exists() {
        return Err(CliError::Data(format!(
            "{} is missing; run a line segment detector on {} and save its output there",
            lines_path.display(),
            rec.image
        )));
    }
    let all = ingest_lsd(&lines_path)?.segments;
    let base = derive_seed(cfg.seed, rec.index as u64);
    let idx = sample_line_indices(all.len(), cfg.max_lines, derive_seed(base, 0));
    let segs: Vec<LineSegment> = idx.iter().map(|&i| all[i]).collect();
    let frame = ImageFrame::new(rec.camera.width, rec.camera.height)?;
    let t = &cfg.thresholds;
    let original = |s: &[usize]| s.iter().map(|&k| idx[k]).collect::<Vec<_>>();
    let unit = |p: &HomPoint| p.to_unit_array();

    let (labels, vps) = match pseudo_vp_pipeline(
        &segs,
        &rec.calib.horizon,
        &frame,
        cfg.count,
        derive_seed(base, 1),
        t,
    ) {
        Ok(v) => (
            label_segments(&segs, &rec.calib.zenith, &v.v0, Some(&v.v1), &frame, t),
            VpFile {
                config_hash: echo.config_hash.clone(),
                complete: true,
                v0: unit(&v.v0),
                v1: Some(unit(&v.v1)),
                support0: original(&v.support0),
                support1: original(&v.support1),
                mass0: v.mass0,
                mass1: v.mass1,
            },
        ),
        Err(LabelError::InsufficientStructure { partial: Some(p) }) => {
            log::warn!("{}: only one horizontal VP found", rec.id);
            (
                label_segments(&segs, &rec.calib.zenith, &p.v0, None, &frame, t),
                VpFile {
                    config_hash: echo.config_hash.clone(),
                    complete: false,
                    v0: unit(&p.v0),
                    v1: None,
                    support0: original(&p.support0),
                    support1: Vec::new(),
                    mass0: p.mass0,
                    mass1: 0.0,
                },
            )
        }
        Err(e) => return Err(e.into()),
    };

    let mut text = Vec::new();
    let header = [
        format!("config_hash {}", echo.config_hash),
        "index cz ch".to_string(),
    ];
    labels
        .write_to(&mut text, &idx, &header)
        .map_err(|e| CliError::io(&dir.join(&rec.labels), e))?;
    write_atomic(&dir.join(&rec.labels), &text)?;
    let mut json = serde_json::to_string(&vps).expect("vp files serialize");
    json.push('\n');
    write_atomic(&dir.join(&rec.pseudo_vps), json.as_bytes())?;
    Ok(())
}
