use std::fmt::Write as _;
use std::path::Path;

use crate::geometry::{GeometryError, LineSegment};

use super::SynthError;

/// Segments read from an LSD text file.
#[derive(Clone, Debug, PartialEq)]
pub struct LsdSegments {
    pub segments: Vec<LineSegment>,
    /// Zero-length rows that were skipped.
    pub dropped: usize,
}

/// Parses LSD output: one segment per row, `x1 y1 x2 y2` followed by any
/// number of ignored columns (width, p, -log10 NFA). Blank rows and rows
/// starting with `#` are skipped.
pub fn parse_lsd(text: &str) -> Result<LsdSegments, SynthError> {
    let mut segments = Vec::new();
    let mut dropped = 0;
    for (n, row) in text.lines().enumerate() {
        let row = row.trim();
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        let bad = || SynthError::Parse {
            row: n + 1,
            content: row.to_string(),
        };
        let cols: Vec<&str> = row.split_whitespace().collect();
        if cols.len() < 4 {
            return Err(bad());
        }
        let mut v = [0.0; 4];
        for (slot, col) in v.iter_mut().zip(&cols) {
            *slot = col.parse::<f64>().map_err(|_| bad())?;
        }
        match LineSegment::from_coords(v[0], v[1], v[2], v[3]) {
            Ok(s) => segments.push(s),
            Err(GeometryError::DegenerateSegment) => dropped += 1,
            Err(_) => return Err(bad()),
        }
    }
    if dropped > 0 {
        log::warn!("dropped {dropped} zero-length segments");
    }
    Ok(LsdSegments { segments, dropped })
}

pub fn ingest_lsd(path: &Path) -> Result<LsdSegments, SynthError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SynthError::Io(format!("{}: {e}", path.display())))?;
    parse_lsd(&text)
}

/// Renders segments in the four-column LSD layout, with `#` header lines.
pub fn format_lsd(segments: &[LineSegment], header: &[String]) -> String {
    let mut s = String::new();
    for h in header {
        let _ = writeln!(s, "# {h}");
    }
    for seg in segments {
        let _ = writeln!(s, "{} {} {} {}", seg.p0.x, seg.p0.y, seg.p1.x, seg.p1.y);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_columns() {
        let r = parse_lsd("0 0 1 0\n").unwrap();
        assert_eq!(r.segments.len(), 1);
        assert_eq!(r.segments[0].length(), 1.0);
        assert_eq!(r.dropped, 0);
    }

    #[test]
    fn seven_columns() {
        let r = parse_lsd("0 0 1 0 2.5 0.125 33.1\n").unwrap();
        assert_eq!(r.segments, parse_lsd("0 0 1 0").unwrap().segments);
    }

    #[test]
    fn zero_length_dropped() {
        let r = parse_lsd("# header\n0 0 0 0\n\n1 1 2 2\n").unwrap();
        assert_eq!(r.dropped, 1);
        assert_eq!(r.segments.len(), 1);
    }

    #[test]
    fn bad_rows_report_line_number() {
        let e = parse_lsd("0 0 1 0\n1 2 x 4\n").unwrap_err();
        assert!(matches!(e, SynthError::Parse { row: 2, .. }));
        assert!(matches!(
            parse_lsd("1 2 3").unwrap_err(),
            SynthError::Parse { row: 1, .. }
        ));
        assert!(matches!(
            parse_lsd("1 2 3 inf").unwrap_err(),
            SynthError::Parse { row: 1, .. }
        ));
    }

    #[test]
    fn format_round_trip() {
        let segs = vec![
            LineSegment::from_coords(0.5, 1.25, 100.0, 3.0).unwrap(),
            LineSegment::from_coords(1.0 / 3.0, 2.0, 7.0, 9.0).unwrap(),
        ];
        let text = format_lsd(&segs, &["seed 1".to_string()]);
        assert!(text.starts_with("# seed 1\n"));
        assert_eq!(parse_lsd(&text).unwrap().segments, segs);
    }
}
