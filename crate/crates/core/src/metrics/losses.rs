use serde::{Deserialize, Serialize};

use crate::geometry::{horizon_boundary_points, HomLine, HomPoint};
use crate::labeling::LineLabel;

use super::MetricsError;

/// Scores are clamped to `[BCE_EPS, 1 - BCE_EPS]` before taking logs.
pub const BCE_EPS: f64 = 1e-7;

/// `1 - |zᵀẑ| / (‖z‖‖ẑ‖)`.
pub fn loss_zenith(z: &HomPoint, z_hat: &HomPoint) -> f64 {
    let (a, b) = (z.coords(), z_hat.coords());
    let cos = (a.dot(b) / (a.norm() * b.norm())).abs().min(1.0);
    1.0 - cos
}

/// Largest L1 offset between the border intersections of two horizons, in
/// pixels.
pub fn loss_horizon(h: &HomLine, h_hat: &HomLine, width: u32) -> Result<f64, MetricsError> {
    let (bl, br) = horizon_boundary_points(h, width)?;
    let (el, er) = horizon_boundary_points(h_hat, width)?;
    Ok((el - bl).lp_norm(1).max((er - br).lp_norm(1)))
}

pub fn loss_fov(f: f64, f_hat: f64) -> f64 {
    (f - f_hat).abs()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BceLoss {
    pub value: f64,
    /// Entries that contributed (label ≠ -1).
    pub n_valid: usize,
    /// Set when every label was `Ignore`; `value` is then 0.
    pub empty_mask: bool,
}

fn check_lengths(labels: &[LineLabel], scores: &[f64]) -> Result<(), MetricsError> {
    if labels.len() != scores.len() {
        return Err(MetricsError::LengthMismatch {
            labels: labels.len(),
            scores: scores.len(),
        });
    }
    Ok(())
}

/// Mean binary cross entropy over the non-ignored entries.
pub fn loss_bce(labels: &[LineLabel], scores: &[f64]) -> Result<BceLoss, MetricsError> {
    check_lengths(labels, scores)?;
    let mut sum = 0.0;
    let mut n = 0usize;
    for (label, &s) in labels.iter().zip(scores) {
        let Some(c) = label.target() else { continue };
        let s = s.clamp(BCE_EPS, 1.0 - BCE_EPS);
        sum -= c * s.ln() + (1.0 - c) * (1.0 - s).ln();
        n += 1;
    }
    Ok(if n == 0 {
        BceLoss {
            value: 0.0,
            n_valid: 0,
            empty_mask: true,
        }
    } else {
        BceLoss {
            value: sum / n as f64,
            n_valid: n,
            empty_mask: false,
        }
    })
}

/// Derivative of [`loss_bce`] with respect to each score.
///
/// Ignored entries and scores outside the clamp range get a zero gradient.
pub fn bce_gradient(labels: &[LineLabel], scores: &[f64]) -> Result<Vec<f64>, MetricsError> {
    check_lengths(labels, scores)?;
    let n = labels.iter().filter(|l| l.target().is_some()).count();
    Ok(labels
        .iter()
        .zip(scores)
        .map(|(label, &s)| match label.target() {
            Some(c) if (BCE_EPS..=1.0 - BCE_EPS).contains(&s) => {
                -(c / s - (1.0 - c) / (1.0 - s)) / n as f64
            }
            _ => 0.0,
        })
        .collect())
}

/// The five loss terms and their sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LossBreakdown {
    pub l_z: f64,
    pub l_h: f64,
    pub l_f: f64,
    pub l_zc: f64,
    pub l_hc: f64,
    pub total: f64,
}

/// Per-term weights; all ones reproduces the plain sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossWeights {
    pub z: f64,
    pub h: f64,
    pub f: f64,
    pub zc: f64,
    pub hc: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        Self {
            z: 1.0,
            h: 1.0,
            f: 1.0,
            zc: 1.0,
            hc: 1.0,
        }
    }
}

pub fn total_loss(l_z: f64, l_h: f64, l_f: f64, l_zc: f64, l_hc: f64) -> LossBreakdown {
    LossBreakdown {
        l_z,
        l_h,
        l_f,
        l_zc,
        l_hc,
        total: l_z + l_h + l_f + l_zc + l_hc,
    }
}

impl LossBreakdown {
    /// Scales each term; `total` stays the plain sum of the scaled terms.
    pub fn weighted(&self, w: &LossWeights) -> LossBreakdown {
        total_loss(
            self.l_z * w.z,
            self.l_h * w.h,
            self.l_f * w.f,
            self.l_zc * w.zc,
            self.l_hc * w.hc,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use LineLabel::*;

    #[test]
    fn zenith_examples() {
        let z = HomPoint::new(1.0, 2.0, 3.0).unwrap();
        assert_abs_diff_eq!(loss_zenith(&z, &z), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(loss_zenith(&z, &z.neg()), 0.0, epsilon = 1e-15);
        let perp = HomPoint::new(2.0, -1.0, 0.0).unwrap();
        assert_abs_diff_eq!(loss_zenith(&z, &perp), 1.0);
    }

    #[test]
    fn horizon_examples() {
        let h = HomLine::new(0.0, 1.0, -256.0).unwrap();
        assert_eq!(loss_horizon(&h, &h, 512).unwrap(), 0.0);
        let h2 = HomLine::new(0.0, 1.0, -266.0).unwrap();
        assert_abs_diff_eq!(loss_horizon(&h, &h2, 512).unwrap(), 10.0, epsilon = 1e-6);
        // slope 0.02 through the center
        let tilted = HomLine::new(0.02, -1.0, 256.0 - 0.02 * 256.0).unwrap();
        assert_abs_diff_eq!(
            loss_horizon(&h, &tilted, 512).unwrap(),
            5.12,
            epsilon = 1e-6
        );
        let vertical = HomLine::new(1.0, 0.0, -3.0).unwrap();
        assert!(loss_horizon(&h, &vertical, 512).is_err());
    }

    #[test]
    fn fov_examples() {
        assert_eq!(loss_fov(60.0, 60.0), 0.0);
        assert_eq!(loss_fov(60.0, 70.0), 10.0);
        assert_eq!(loss_fov(45.5, 44.25), 1.25);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn bce_examples() {
        let l = loss_bce(&[Convergent; 3], &[1.0 - BCE_EPS; 3]).unwrap();
        assert_abs_diff_eq!(l.value, 0.0, epsilon = 1e-6);
        let l = loss_bce(&[Convergent], &[0.5]).unwrap();
        assert_abs_diff_eq!(l.value, 0.693_147, epsilon = 1e-6);
        let l = loss_bce(&[Convergent, Ignore, NonConvergent], &[0.9, 0.1, 0.2]).unwrap();
        assert_eq!(l.n_valid, 2);
        assert_abs_diff_eq!(l.value, 0.164_252, epsilon = 1e-6);
        let l = loss_bce(&[Ignore, Ignore], &[0.3, 0.4]).unwrap();
        assert!(l.empty_mask);
        assert_eq!(l.value, 0.0);
        assert!(loss_bce(&[Ignore], &[]).is_err());
        // saturated scores stay finite
        let l = loss_bce(&[Convergent, NonConvergent], &[0.0, 1.0]).unwrap();
        assert!(l.value.is_finite());
    }

    #[test]
    fn total_is_sum() {
        assert_eq!(total_loss(0.0, 0.0, 0.0, 0.0, 0.0).total, 0.0);
        assert_abs_diff_eq!(
            total_loss(0.1, 2.0, 3.0, 0.5, 0.4).total,
            6.0,
            epsilon = 1e-12
        );
        let w = LossWeights {
            h: 0.5,
            ..LossWeights::default()
        };
        let b = total_loss(1.0, 2.0, 3.0, 4.0, 5.0).weighted(&w);
        assert_eq!(b.l_h, 1.0);
        assert_eq!(b.total, 14.0);
    }

    fn label() -> impl Strategy<Value = LineLabel> {
        prop_oneof![Just(Convergent), Just(NonConvergent), Just(Ignore)]
    }

    proptest! {
        #[test]
        fn total_sum_property(p in proptest::array::uniform5(0.0..10.0f64)) {
            let b = total_loss(p[0], p[1], p[2], p[3], p[4]);
            prop_assert_eq!(b.total, b.l_z + b.l_h + b.l_f + b.l_zc + b.l_hc);
        }

        #[test]
        fn zenith_scale_sign_invariant(
            z in proptest::array::uniform3(-10.0..10.0f64),
            w in proptest::array::uniform3(-10.0..10.0f64),
            a in 0.01..100.0f64,
            b in 0.01..100.0f64,
        ) {
            prop_assume!(z.iter().any(|c| c.abs() > 1e-3) && w.iter().any(|c| c.abs() > 1e-3));
            let z0 = hp(z);
            let w0 = hp(w);
            let z1 = hp(z.map(|c| c * a));
            let w1 = hp(w.map(|c| -c * b));
            prop_assert!((loss_zenith(&z0, &w0) - loss_zenith(&z1, &w1)).abs() < 1e-12);
        }

        #[test]
        fn horizon_symmetric(y0 in 0.0..512.0f64, y1 in 0.0..512.0f64, s0 in -0.5..0.5f64, s1 in -0.5..0.5f64) {
            let a = HomLine::new(s0, -1.0, y0).unwrap();
            let b = HomLine::new(s1, -1.0, y1).unwrap();
            let ab = loss_horizon(&a, &b, 512).unwrap();
            prop_assert_eq!(ab, loss_horizon(&b, &a, 512).unwrap());
            prop_assert_eq!(ab == 0.0, y0 == y1 && s0 == s1);
        }

        #[test]
        fn bce_gradient_matches_finite_differences(
            entries in proptest::collection::vec((label(), 0.05..0.95f64), 1..8)
        ) {
            let labels: Vec<LineLabel> = entries.iter().map(|e| e.0).collect();
            let scores: Vec<f64> = entries.iter().map(|e| e.1).collect();
            let grad = bce_gradient(&labels, &scores).unwrap();
            let h = 1e-6;
            for i in 0..scores.len() {
                let mut up = scores.clone();
                let mut dn = scores.clone();
                up[i] += h;
                dn[i] -= h;
                let fd = (loss_bce(&labels, &up).unwrap().value
                    - loss_bce(&labels, &dn).unwrap().value) / (2.0 * h);
                if grad[i] == 0.0 {
                    prop_assert!(fd.abs() < 1e-9);
                } else {
                    prop_assert!(((fd - grad[i]) / grad[i]).abs() < 1e-5, "{} vs {}", fd, grad[i]);
                }
            }
        }
    }

    fn hp(v: [f64; 3]) -> HomPoint {
        HomPoint::try_from(v).unwrap()
    }

    #[test]
    fn gradient_single_entry() {
        let g = bce_gradient(&[Convergent], &[0.5]).unwrap();
        assert_relative_eq!(g[0], -2.0);
    }
}
