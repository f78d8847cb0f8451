use std::cmp::Ordering;
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::geometry::{point_line_distance, HomLine, HomPoint, ImageFrame, LineSegment};

use super::LabelError;

/// Ternary convergence label; compares by numeric value (`1 > 0 > -1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum LineLabel {
    Convergent,
    NonConvergent,
    Ignore,
}

impl LineLabel {
    pub fn value(self) -> i8 {
        match self {
            LineLabel::Convergent => 1,
            LineLabel::NonConvergent => 0,
            LineLabel::Ignore => -1,
        }
    }

    /// Binary target for the classification loss, `None` when ignored.
    pub fn target(self) -> Option<f64> {
        match self {
            LineLabel::Convergent => Some(1.0),
            LineLabel::NonConvergent => Some(0.0),
            LineLabel::Ignore => None,
        }
    }
}

impl From<LineLabel> for i8 {
    fn from(l: LineLabel) -> Self {
        l.value()
    }
}

impl TryFrom<i8> for LineLabel {
    type Error = LabelError;

    fn try_from(v: i8) -> Result<Self, Self::Error> {
        match v {
            1 => Ok(LineLabel::Convergent),
            0 => Ok(LineLabel::NonConvergent),
            -1 => Ok(LineLabel::Ignore),
            other => Err(LabelError::InvalidLabel(i64::from(other))),
        }
    }
}

impl Ord for LineLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value().cmp(&other.value())
    }
}

impl PartialOrd for LineLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LineLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Distance thresholds: `delta0`/`delta1` bracket the ignore band of the
/// labels, `delta` drives horizon filtering and consensus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub delta0: f64,
    pub delta1: f64,
    pub delta: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            delta0: 2f64.to_radians().sin(),
            delta1: 5f64.to_radians().sin(),
            delta: 2.5f64.to_radians().sin(),
        }
    }
}

impl Thresholds {
    pub fn new(delta0: f64, delta1: f64, delta: f64) -> Result<Self, LabelError> {
        let t = Self {
            delta0,
            delta1,
            delta,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), LabelError> {
        let ok = 0.0 < self.delta0
            && self.delta0 < self.delta
            && self.delta < self.delta1
            && self.delta1 < 1.0;
        if ok {
            Ok(())
        } else {
            Err(LabelError::InvalidThresholds(*self))
        }
    }
}

/// `1` if `d ≤ δ₀`, `0` if `d ≥ δ₁`, `-1` in between.
pub fn label_from_distance(d: f64, t: &Thresholds) -> LineLabel {
    if d <= t.delta0 {
        LineLabel::Convergent
    } else if d >= t.delta1 {
        LineLabel::NonConvergent
    } else {
        LineLabel::Ignore
    }
}

pub fn label_line(l: &HomLine, v: &HomPoint, t: &Thresholds) -> LineLabel {
    label_from_distance(point_line_distance(l, v), t)
}

/// Per-line labels against the zenith (`cz`) and the horizontal VPs (`ch`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSet {
    pub cz: Vec<LineLabel>,
    pub ch: Vec<LineLabel>,
}

impl LabelSet {
    pub fn len(&self) -> usize {
        self.cz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cz.is_empty()
    }

    /// Writes `index cz ch` rows; `indices` maps rows back to the source
    /// line file. Lines starting with `#` are comments.
    pub fn write_to<W: Write>(
        &self,
        out: &mut W,
        indices: &[usize],
        header: &[String],
    ) -> std::io::Result<()> {
        for h in header {
            writeln!(out, "# {h}")?;
        }
        for ((i, cz), ch) in indices.iter().zip(&self.cz).zip(&self.ch) {
            writeln!(out, "{i} {cz} {ch}")?;
        }
        Ok(())
    }

    /// Parses the format produced by [`LabelSet::write_to`].
    pub fn read_from<R: BufRead>(input: R) -> Result<(Vec<usize>, LabelSet), LabelError> {
        let mut indices = Vec::new();
        let mut set = LabelSet {
            cz: Vec::new(),
            ch: Vec::new(),
        };
        for (n, line) in input.lines().enumerate() {
            let line = line.map_err(|e| LabelError::Io(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || LabelError::Parse {
                row: n + 1,
                content: line.to_string(),
            };
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 3 {
                return Err(bad());
            }
            let idx: usize = cols[0].parse().map_err(|_| bad())?;
            let cz: i8 = cols[1].parse().map_err(|_| bad())?;
            let ch: i8 = cols[2].parse().map_err(|_| bad())?;
            indices.push(idx);
            set.cz.push(LineLabel::try_from(cz).map_err(|_| bad())?);
            set.ch.push(LineLabel::try_from(ch).map_err(|_| bad())?);
        }
        Ok((indices, set))
    }
}

/// `cz[i] = c(lᵢ, z)`, `ch[i] = max(c(lᵢ, v0), c(lᵢ, v1))`.
///
/// Without a second horizontal VP, `ch` uses `v0` alone. Coordinates of
/// lines and points must share one frame.
pub fn label_set(
    lines: &[HomLine],
    z: &HomPoint,
    v0: &HomPoint,
    v1: Option<&HomPoint>,
    t: &Thresholds,
) -> LabelSet {
    let cz = lines.iter().map(|l| label_line(l, z, t)).collect();
    let ch = lines
        .iter()
        .map(|l| {
            let a = label_line(l, v0, t);
            match v1 {
                Some(v1) => a.max(label_line(l, v1, t)),
                None => a,
            }
        })
        .collect();
    LabelSet { cz, ch }
}

/// Labels pixel-space segments against pixel-space VPs, evaluating the
/// distances in the normalized [`ImageFrame`].
pub fn label_segments(
    segments: &[LineSegment],
    z: &HomPoint,
    v0: &HomPoint,
    v1: Option<&HomPoint>,
    frame: &ImageFrame,
    t: &Thresholds,
) -> LabelSet {
    let lines: Vec<HomLine> = segments
        .iter()
        .map(|s| frame.normalize_segment(s).line())
        .collect();
    let z = frame.normalize_point(z);
    let v0 = frame.normalize_point(v0);
    let v1 = v1.map(|v| frame.normalize_point(v));
    label_set(&lines, &z, &v0, v1.as_ref(), t)
}
