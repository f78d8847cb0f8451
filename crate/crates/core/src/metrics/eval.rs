use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::geometry::{calib_to_camera, horizon_boundary_points, up_direction_from_zenith};
use crate::geometry::{CalibGT, HomLine};

use super::MetricsError;

/// Default upper bound of the horizon-error axis, as a fraction of image height.
pub const DEFAULT_AUC_X_MAX: f64 = 0.25;

/// Absolute angle errors in degrees.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleErrors {
    pub up_deg: f64,
    pub pitch_deg: f64,
    pub roll_deg: f64,
    pub fov_deg: f64,
}

/// Unsigned angle between two vectors, stable near 0 and 180 degrees.
pub fn angle_between(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a.cross(b).norm().atan2(a.dot(b)).to_degrees()
}

fn wrapped_diff_deg(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    d.min(360.0 - d)
}

/// Up-direction, pitch, roll and FoV errors between two calibrations.
///
/// Pitch and roll come from [`calib_to_camera`]; the up error is the angle
/// between the two zenith rays, each back-projected with its own focal length.
pub fn angle_errors(gt: &CalibGT, est: &CalibGT) -> Result<AngleErrors, MetricsError> {
    let cg = calib_to_camera(gt)?;
    let ce = calib_to_camera(est)?;
    let ug = up_direction_from_zenith(&gt.zenith, gt.focal_px()?, gt.center())?;
    let ue = up_direction_from_zenith(&est.zenith, est.focal_px()?, est.center())?;
    Ok(AngleErrors {
        up_deg: angle_between(&ug, &ue),
        pitch_deg: (cg.pitch_deg - ce.pitch_deg).abs(),
        roll_deg: wrapped_diff_deg(cg.roll_deg, ce.roll_deg),
        fov_deg: (cg.fov_deg - ce.fov_deg).abs(),
    })
}

/// Largest vertical offset at the left/right borders, over image height.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HorizonError(pub f64);

pub fn horizon_error(
    h: &HomLine,
    h_hat: &HomLine,
    width: u32,
    height: u32,
) -> Result<HorizonError, MetricsError> {
    if height == 0 {
        return Err(MetricsError::InvalidArgument("image height is zero".into()));
    }
    let (bl, br) = horizon_boundary_points(h, width)?;
    let (el, er) = horizon_boundary_points(h_hat, width)?;
    let dy = (el.y - bl.y).abs().max((er.y - br.y).abs());
    Ok(HorizonError(dy / f64::from(height)))
}

fn check_auc_inputs(errors: &[f64], x_max: f64) -> Result<(), MetricsError> {
    if errors.is_empty() {
        return Err(MetricsError::EmptyList);
    }
    if !(x_max.is_finite() && x_max > 0.0) {
        return Err(MetricsError::InvalidArgument(format!(
            "x_max {x_max} must be > 0"
        )));
    }
    if let Some(e) = errors.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
        return Err(MetricsError::InvalidArgument(format!(
            "error value {e} must be finite and >= 0"
        )));
    }
    Ok(())
}

/// Area under the empirical CDF of `errors` on `[0, x_max]`, normalized to
/// a percentage.
///
/// An error `e` contributes `(x_max - e) / x_max` of its mass, nothing when
/// it exceeds `x_max`.
pub fn auc_cumulative(errors: &[f64], x_max: f64) -> Result<f64, MetricsError> {
    check_auc_inputs(errors, x_max)?;
    let covered: f64 = errors.iter().map(|&e| (x_max - e).max(0.0)).sum();
    Ok(100.0 * covered / (x_max * errors.len() as f64))
}

/// Corners of the empirical CDF step curve on `[0, x_max]`, as
/// `(error, percent)` pairs.
pub fn cumulative_curve(errors: &[f64], x_max: f64) -> Result<Vec<(f64, f64)>, MetricsError> {
    check_auc_inputs(errors, x_max)?;
    let mut sorted = errors.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut curve = Vec::with_capacity(2 * sorted.len() + 2);
    let mut count = sorted.iter().take_while(|&&e| e == 0.0).count();
    curve.push((0.0, 100.0 * count as f64 / n));
    while count < sorted.len() && sorted[count] <= x_max {
        let x = sorted[count];
        curve.push((x, 100.0 * count as f64 / n));
        while count < sorted.len() && sorted[count] == x {
            count += 1;
        }
        curve.push((x, 100.0 * count as f64 / n));
    }
    curve.push((x_max, 100.0 * count as f64 / n));
    Ok(curve)
}
