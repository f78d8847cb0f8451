use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::geometry::{point_line_distance, HomLine, HomPoint, ImageFrame, LineSegment};

use super::{LabelError, Thresholds};

/// Pairs whose unit-line cross product is shorter than this are skipped.
pub const NEAR_PARALLEL_EPS: f64 = 1e-8;

/// Default number of sampled line pairs.
pub const DEFAULT_CANDIDATE_COUNT: usize = 2000;

/// Sampling gives up after `count * ATTEMPTS_PER_CANDIDATE` draws.
const ATTEMPTS_PER_CANDIDATE: usize = 64;

fn ser_unit<S: Serializer>(p: &HomPoint, s: S) -> Result<S::Ok, S::Error> {
    p.to_unit_array().serialize(s)
}

/// Two horizontal VPs with disjoint supporting line sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PseudoVPs {
    #[serde(serialize_with = "ser_unit")]
    pub v0: HomPoint,
    #[serde(serialize_with = "ser_unit")]
    pub v1: HomPoint,
    pub support0: Vec<usize>,
    pub support1: Vec<usize>,
    pub mass0: f64,
    pub mass1: f64,
}

/// The first VP when the second consensus round comes up empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialVp {
    #[serde(serialize_with = "ser_unit")]
    pub v0: HomPoint,
    pub support0: Vec<usize>,
    pub mass0: f64,
}

/// Candidate VPs from the intersections of uniformly sampled segment pairs.
///
/// Pairs are drawn as unordered pairs of distinct indices. Pairs whose
/// supporting lines coincide are skipped and redrawn.
pub fn vp_candidates(
    lines: &[LineSegment],
    count: usize,
    seed: u64,
) -> Result<Vec<HomPoint>, LabelError> {
    let n = lines.len();
    if n < 2 || count == 0 {
        return Err(LabelError::NoCandidates);
    }
    let unit: Vec<HomLine> = lines.iter().map(|s| s.line().normalized()).collect();
    let crossing = |a: usize, b: usize| {
        let v = unit[a].coords().cross(unit[b].coords());
        (v.norm() >= NEAR_PARALLEL_EPS).then_some(v)
    };
    let any_valid = (0..n).any(|a| (a + 1..n).any(|b| crossing(a, b).is_some()));
    if !any_valid {
        return Err(LabelError::NoCandidates);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    let budget = count.saturating_mul(ATTEMPTS_PER_CANDIDATE);
    while out.len() < count && attempts < budget {
        attempts += 1;
        let a = rng.random_range(0..n);
        let mut b = rng.random_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        if let Some(v) = crossing(a, b) {
            out.push(HomPoint::from_vector(v).expect("nonzero cross product"));
        }
    }
    if out.len() < count {
        log::warn!(
            "vp_candidates: only {} of {count} candidates after {attempts} draws",
            out.len()
        );
    }
    Ok(out)
}

/// Keeps candidates with `d(h, v) < delta`, preserving order.
pub fn filter_horizon_candidates(cands: &[HomPoint], h: &HomLine, delta: f64) -> Vec<HomPoint> {
    cands
        .iter()
        .filter(|v| point_line_distance(h, v) < delta)
        .copied()
        .collect()
}

/// Summed length of the segments with `d(l, v) < delta`, and their indices.
pub fn consensus_mass(v: &HomPoint, lines: &[LineSegment], delta: f64) -> (f64, Vec<usize>) {
    consensus_over(v, lines, delta, |_| true)
}

fn consensus_over(
    v: &HomPoint,
    lines: &[LineSegment],
    delta: f64,
    active: impl Fn(usize) -> bool,
) -> (f64, Vec<usize>) {
    let mut mass = 0.0;
    let mut support = Vec::new();
    for (i, s) in lines.iter().enumerate() {
        if active(i) && point_line_distance(&s.line(), v) < delta {
            mass += s.length();
            support.push(i);
        }
    }
    (mass, support)
}

/// Index and consensus of the heaviest candidate; ties keep the lowest index.
fn heaviest(
    cands: &[HomPoint],
    lines: &[LineSegment],
    delta: f64,
    active: impl Fn(usize) -> bool + Copy,
) -> Option<(usize, f64, Vec<usize>)> {
    let mut best: Option<(usize, f64, Vec<usize>)> = None;
    for (i, v) in cands.iter().enumerate() {
        let (m, support) = consensus_over(v, lines, delta, active);
        if best.as_ref().is_none_or(|(_, bm, _)| m > *bm) {
            best = Some((i, m, support));
        }
    }
    best
}

/// Greedy two-round selection: the heaviest candidate becomes `v0`, its
/// supporting lines are removed, and the heaviest candidate over the
/// remaining lines becomes `v1`.
pub fn select_pseudo_vps(
    cands: &[HomPoint],
    lines: &[LineSegment],
    delta: f64,
) -> Result<PseudoVPs, LabelError> {
    let first = heaviest(cands, lines, delta, |_| true);
    let partial = match first {
        Some((i, m, support)) if m > 0.0 => Some(PartialVp {
            v0: cands[i],
            support0: support,
            mass0: m,
        }),
        _ => None,
    };
    let Some(p) = partial else {
        return Err(LabelError::InsufficientStructure { partial: None });
    };
    if cands.len() < 2 {
        return Err(LabelError::InsufficientStructure {
            partial: Some(Box::new(p)),
        });
    }

    let mut removed = vec![false; lines.len()];
    for &i in &p.support0 {
        removed[i] = true;
    }
    match heaviest(cands, lines, delta, |i| !removed[i]) {
        Some((j, m, support)) if m > 0.0 => Ok(PseudoVPs {
            v0: p.v0,
            v1: cands[j],
            support0: p.support0,
            support1: support,
            mass0: p.mass0,
            mass1: m,
        }),
        _ => Err(LabelError::InsufficientStructure {
            partial: Some(Box::new(p)),
        }),
    }
}

/// Candidates, horizon filtering and greedy selection for pixel-space
/// segments and a pixel-space horizon. Distances are evaluated in the
/// normalized image frame; returned VPs are in pixels.
pub fn pseudo_vp_pipeline(
    lines: &[LineSegment],
    h: &HomLine,
    frame: &ImageFrame,
    count: usize,
    seed: u64,
    t: &Thresholds,
) -> Result<PseudoVPs, LabelError> {
    let norm: Vec<LineSegment> = lines.iter().map(|s| frame.normalize_segment(s)).collect();
    let hn = frame.normalize_line(h);
    let cands = vp_candidates(&norm, count, seed)?;
    let kept = filter_horizon_candidates(&cands, &hn, t.delta);
    match select_pseudo_vps(&kept, &norm, t.delta) {
        Ok(mut vps) => {
            vps.v0 = frame.denormalize_point(&vps.v0);
            vps.v1 = frame.denormalize_point(&vps.v1);
            Ok(vps)
        }
        Err(LabelError::InsufficientStructure { partial }) => {
            Err(LabelError::InsufficientStructure {
                partial: partial.map(|mut p| {
                    p.v0 = frame.denormalize_point(&p.v0);
                    p
                }),
            })
        }
        Err(e) => Err(e),
    }
}
