use std::io::Cursor;

use vpcal_core::geometry::{HomLine, HomPoint, ImageFrame, LineSegment};
use vpcal_core::labeling::{
    label_from_distance, label_line, label_segments, label_set, LabelSet, LineLabel, Thresholds,
};

/// Direct evaluation of the ternary rule, written independently of the crate.
fn oracle(d: f64) -> i8 {
    let (lo, hi) = (2f64.to_radians().sin(), 5f64.to_radians().sin());
    if d <= lo {
        1
    } else if d >= hi {
        0
    } else {
        -1
    }
}

/// Line `x = 0` and a point direction making angle `theta` with it.
fn pair_at(theta_rad: f64) -> (HomLine, HomPoint) {
    let (s, c) = theta_rad.sin_cos();
    (
        HomLine::new(1.0, 0.0, 0.0).unwrap(),
        HomPoint::new(s, c, 0.0).unwrap(),
    )
}

#[test]
fn sweep_matches_direct_evaluation() {
    let t = Thresholds::default();
    let mut grid: Vec<f64> = (0..=20_000).map(|k| f64::from(k) / 20_000.0).collect();
    for edge in [t.delta0, t.delta1] {
        grid.extend([edge, edge.next_down(), edge.next_up()]);
    }
    for d in grid {
        assert_eq!(label_from_distance(d, &t).value(), oracle(d), "d = {d}");
    }
    assert_eq!(label_from_distance(t.delta0, &t), LineLabel::Convergent);
    assert_eq!(label_from_distance(t.delta1, &t), LineLabel::NonConvergent);
}

#[test]
fn sweep_over_geometric_angles() {
    let t = Thresholds::default();
    for k in 0..=9000 {
        let theta = (f64::from(k) / 100.0).to_radians();
        let (l, v) = pair_at(theta);
        let d = (l.coords().dot(v.coords())).abs() / (l.coords().norm() * v.coords().norm());
        assert_eq!(label_line(&l, &v, &t).value(), oracle(d), "theta = {theta}");
    }
    let (l, v) = pair_at(3f64.to_radians());
    assert_eq!(label_line(&l, &v, &t), LineLabel::Ignore);
    let (l, v) = pair_at(10f64.to_radians());
    assert_eq!(label_line(&l, &v, &t), LineLabel::NonConvergent);
}

#[test]
fn horizontal_label_takes_numeric_max() {
    let t = Thresholds::default();
    let l = HomLine::new(1.0, 0.0, 0.0).unwrap();
    let dir = |deg: f64| {
        let (s, c) = deg.to_radians().sin_cos();
        HomPoint::new(s, c, 0.0).unwrap()
    };
    let z = dir(0.0);
    let set = label_set(&[l], &z, &dir(3.0), Some(&dir(10.0)), &t);
    assert_eq!(set.cz, vec![LineLabel::Convergent]);
    assert_eq!(set.ch, vec![LineLabel::NonConvergent]);
    let set = label_set(&[l], &dir(30.0), &dir(0.0), Some(&dir(10.0)), &t);
    assert_eq!(set.cz, vec![LineLabel::NonConvergent]);
    assert_eq!(set.ch, vec![LineLabel::Convergent]);
}

#[test]
fn segments_through_vps_label_convergent() {
    let frame = ImageFrame::new(640, 480).unwrap();
    let t = Thresholds::default();
    let z = HomPoint::from_pixel(300.0, -2000.0);
    let v0 = HomPoint::from_pixel(-400.0, 200.0);
    let v1 = HomPoint::from_pixel(1500.0, 230.0);
    let toward = |v: &HomPoint, x: f64, y: f64, frac: f64| {
        let p = v.to_pixel().unwrap();
        LineSegment::from_coords(x, y, x + (p.x - x) * frac, y + (p.y - y) * frac).unwrap()
    };
    let segs = [
        toward(&z, 100.0, 400.0, 0.1),
        toward(&v0, 500.0, 100.0, 0.2),
        toward(&v1, 50.0, 450.0, 0.3),
        LineSegment::from_coords(10.0, 10.0, 200.0, 300.0).unwrap(),
    ];
    let set = label_segments(&segs, &z, &v0, Some(&v1), &frame, &t);
    assert_eq!(set.cz[0], LineLabel::Convergent);
    assert_eq!(set.ch[1], LineLabel::Convergent);
    assert_eq!(set.ch[2], LineLabel::Convergent);
    assert_eq!(set.cz[3], LineLabel::NonConvergent);
    assert_eq!(set.ch[3], LineLabel::NonConvergent);
}

#[test]
fn label_file_round_trip() {
    use LineLabel::*;
    let set = LabelSet {
        cz: vec![Convergent, Ignore, NonConvergent],
        ch: vec![NonConvergent, Convergent, Ignore],
    };
    let mut buf = Vec::new();
    set.write_to(&mut buf, &[0, 4, 9], &["config_hash abc".to_string()])
        .unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert_eq!(text, "# config_hash abc\n0 1 0\n4 -1 1\n9 0 -1\n");
    let (idx, back) = LabelSet::read_from(Cursor::new(buf)).unwrap();
    assert_eq!(idx, vec![0, 4, 9]);
    assert_eq!(back, set);
    assert!(LabelSet::read_from(Cursor::new("0 2 1\n")).is_err());
    assert!(LabelSet::read_from(Cursor::new("0 1\n")).is_err());
}
