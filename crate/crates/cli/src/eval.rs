use std::collections::HashMap;
use std::path::Path;

use rayon::prelude::*;
use rayon::ThreadPool;
use serde::{Deserialize, Serialize};
use vpcal_core::metrics::{angle_errors, horizon_error, EvalRecord, EvalReport};
use vpcal_core::synth::{read_manifest, write_atomic, SceneRecord};
use vpcal_core::{camera_to_calib, CalibGT, CameraFrame, HomLine, HomPoint};

use crate::config::{file_digest, Echo, EvalConfig};
use crate::label::manifest_hash;
use crate::{files, report_record_errors, CliError, EvalArgs};

/// One line of a predictions file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub id: String,
    /// Hash of the manifest the prediction was made for.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
    #[serde(flatten)]
    pub body: PredictionBody,
}

/// Either calibration form; image size comes from the manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PredictionBody {
    Calib {
        zenith: HomPoint,
        horizon: HomLine,
        fov_deg: f64,
    },
    Camera {
        fov_deg: f64,
        pitch_deg: f64,
        roll_deg: f64,
    },
}

impl PredictionBody {
    pub fn to_calib(&self, width: u32, height: u32) -> Result<CalibGT, CliError> {
        Ok(match *self {
            PredictionBody::Calib {
                zenith,
                horizon,
                fov_deg,
            } => CalibGT {
                zenith,
                horizon,
                fov_deg,
                width,
                height,
            },
            PredictionBody::Camera {
                fov_deg,
                pitch_deg,
                roll_deg,
            } => camera_to_calib(&CameraFrame::new(
                fov_deg, pitch_deg, roll_deg, width, height,
            )?)?,
        })
    }
}

/// Contents of `eval.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalOutput {
    pub config_hash: String,
    pub config: EvalConfig,
    pub report: EvalReport,
}

/// Predictions equal to the manifest ground truth, as JSON lines.
pub fn ground_truth_predictions(records: &[SceneRecord]) -> String {
    let mut s = String::new();
    for r in records {
        let p = Prediction {
            id: r.id.clone(),
            config_hash: Some(r.config_hash.clone()),
            body: PredictionBody::Calib {
                zenith: r.calib.zenith,
                horizon: r.calib.horizon,
                fov_deg: r.calib.fov_deg,
            },
        };
        s.push_str(&serde_json::to_string(&p).expect("predictions serialize"));
        s.push('\n');
    }
    s
}

fn read_predictions(path: &Path) -> Result<HashMap<String, Prediction>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut out = HashMap::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let p: Prediction = serde_json::from_str(line)
            .map_err(|e| CliError::Data(format!("{} row {}: {e}", path.display(), n + 1)))?;
        if let Some(old) = out.insert(p.id.clone(), p) {
            return Err(CliError::Data(format!(
                "{} row {}: duplicate id {}",
                path.display(),
                n + 1,
                old.id
            )));
        }
    }
    Ok(out)
}

pub(crate) fn run(a: &EvalArgs, pool: &ThreadPool) -> Result<(), CliError> {
    if !(a.auc_max.is_finite() && a.auc_max > 0.0) {
        return Err(CliError::Config(format!(
            "--auc-max {} must be > 0",
            a.auc_max
        )));
    }
    let records = read_manifest(&a.manifest)?;
    if records.is_empty() {
        return Err(CliError::Data(format!(
            "{} has no records",
            a.manifest.display()
        )));
    }
    let mhash = manifest_hash(&records, &a.manifest)?;
    let preds = read_predictions(&a.predictions)?;

    let mismatched: Vec<&str> = records
        .iter()
        .filter_map(|r| preds.get(&r.id))
        .filter(|p| p.config_hash.as_deref() != Some(mhash.as_str()))
        .map(|p| p.id.as_str())
        .collect();
    if !mismatched.is_empty() {
        let msg = format!(
            "{} predictions do not carry the manifest config hash {mhash} (first: {})",
            mismatched.len(),
            mismatched[0]
        );
        if !a.force {
            return Err(CliError::Data(format!(
                "{msg}; use --force to score them anyway"
            )));
        }
        log::warn!("{msg}");
    }
    let extra = preds.len() - records.iter().filter(|r| preds.contains_key(&r.id)).count();
    if extra > 0 {
        log::warn!("{extra} predictions have no matching manifest record");
    }

    let echo = Echo::new(EvalConfig {
        command: "eval".into(),
        manifest_hash: mhash,
        predictions_sha256: file_digest(&a.predictions)?,
        auc_max: a.auc_max,
        force: a.force,
    });
    std::fs::create_dir_all(&a.out).map_err(|e| CliError::io(&a.out, e))?;
    let results: Vec<Result<EvalRecord, CliError>> = pool.install(|| {
        records
            .par_iter()
            .map(|r| eval_one(r, preds.get(&r.id)))
            .collect()
    });
    let mut rows = Vec::with_capacity(results.len());
    let mut errors = Vec::new();
    for (r, res) in records.iter().zip(results) {
        match res {
            Ok(row) => rows.push(row),
            Err(e) => errors.push((r.id.clone(), e)),
        }
    }
    report_record_errors(&a.out, errors)?;

    let report = EvalReport::from_records(rows, a.auc_max, echo.config_hash.clone())?;
    let mut csv = Vec::new();
    report.write_csv(&mut csv).expect("writing to memory");
    write_atomic(&a.out.join(files::EVAL_CSV), &csv)?;
    let out = EvalOutput {
        config_hash: echo.config_hash,
        config: echo.config,
        report,
    };
    let mut json = serde_json::to_string_pretty(&out).expect("reports serialize");
    json.push('\n');
    write_atomic(&a.out.join(files::EVAL_JSON), json.as_bytes())?;
    let agg = &out.report.aggregates;
    log::info!(
        "{} images: up {:.3} deg (median), horizon AUC {:.2}%",
        agg.count,
        agg.up.median,
        agg.auc_percent
    );
    Ok(())
}

fn eval_one(rec: &SceneRecord, pred: Option<&Prediction>) -> Result<EvalRecord, CliError> {
    let pred = pred.ok_or_else(|| CliError::Data("no prediction".into()))?;
    let (w, h) = (rec.calib.width, rec.calib.height);
    let est = pred.body.to_calib(w, h)?;
    let e = angle_errors(&rec.calib, &est)?;
    let horizon = horizon_error(&rec.calib.horizon, &est.horizon, w, h)?;
    Ok(EvalRecord {
        id: rec.id.clone(),
        up_err_deg: e.up_deg,
        pitch_err_deg: e.pitch_deg,
        roll_err_deg: e.roll_deg,
        fov_err_deg: e.fov_deg,
        horizon_err: horizon.0,
    })
}
