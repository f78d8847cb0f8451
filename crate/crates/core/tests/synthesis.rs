use std::f64::consts::PI;

use image::{Rgb, RgbImage};
use vpcal_core::geometry::{camera_to_calib, CameraFrame, HomLine, ImageFrame, LineSegment};
use vpcal_core::labeling::{label_segments, LineLabel, Thresholds};
use vpcal_core::synth::{
    derive_seed, lonlat_to_ray, ray_to_lonlat, rectify_equirect, sample_view, Panorama,
    SampleRanges, ViewRays,
};

/// White panorama with dark vertical stripes centered on the given
/// longitudes (radians), each `half_width` wide on either side.
fn stripe_panorama(width: u32, lons: &[f64], half_width: f64) -> Panorama {
    let h = width / 2;
    let img = RgbImage::from_fn(width, h, |i, _| {
        let lon = (f64::from(i) + 0.5) / f64::from(width) * 2.0 * PI - PI;
        let near = lons.iter().any(|&l| {
            let d = (lon - l + PI).rem_euclid(2.0 * PI) - PI;
            d.abs() <= half_width
        });
        if near {
            Rgb([0, 0, 0])
        } else {
            Rgb([255, 255, 255])
        }
    });
    Panorama::new(img)
}

/// Dark-weighted centroid per row, then a total least squares line fit.
/// Rows where the stripe is clipped by the image border are skipped.
fn fit_stripe(img: &RgbImage, x_lo: u32, x_hi: u32) -> Option<(HomLine, LineSegment)> {
    let mut pts = Vec::new();
    for j in 0..img.height() {
        let (mut m, mut mx) = (0.0, 0.0);
        for i in x_lo..x_hi {
            let w = 255.0 - f64::from(img.get_pixel(i, j).0[0]);
            m += w;
            mx += w * (f64::from(i) + 0.5);
        }
        let edge = |i: u32| img.get_pixel(i, j).0[0] < 255;
        if m > 0.0 && !edge(x_lo) && !edge(x_hi - 1) {
            pts.push((mx / m, f64::from(j) + 0.5));
        }
    }
    if pts.len() < 32 {
        return None;
    }
    let n = pts.len() as f64;
    let (cx, cy) = pts
        .iter()
        .fold((0.0, 0.0), |a, p| (a.0 + p.0 / n, a.1 + p.1 / n));
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in &pts {
        sxx += (x - cx) * (x - cx);
        sxy += (x - cx) * (y - cy);
        syy += (y - cy) * (y - cy);
    }
    // normal of the best fit line is the eigenvector of the smaller eigenvalue
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let (nx, ny) = (-theta.sin(), theta.cos());
    let line = HomLine::new(nx, ny, -(nx * cx + ny * cy)).ok()?;
    let (first, last) = (pts[0], pts[pts.len() - 1]);
    let seg = LineSegment::from_coords(first.0, first.1, last.0, last.1).ok()?;
    Some((line, seg))
}

/// Pixel distance from a finite point to a line.
fn pixel_distance(l: &HomLine, x: f64, y: f64) -> f64 {
    let c = l.coords();
    (c.x * x + c.y * y + c.z).abs() / c.xy().norm()
}

#[test]
fn meridian_stripe_passes_through_zenith() {
    let cam = CameraFrame::new(60.0, 15.0, 8.0, 512, 512).unwrap();
    let yaw = 30.0;
    let pano = stripe_panorama(8192, &[40f64.to_radians()], 0.4f64.to_radians());
    let img = rectify_equirect(&pano, &cam, yaw);
    let (line, _) = fit_stripe(&img, 0, 512).expect("stripe visible");
    let z = camera_to_calib(&cam).unwrap().zenith.to_pixel().unwrap();
    let d = pixel_distance(&line, z.x, z.y);
    assert!(d < 0.5, "zenith {z:?} is {d} px from the fitted stripe");
}

#[test]
fn rendered_verticals_label_convergent() {
    let t = Thresholds::default();
    let frame = ImageFrame::new(256, 256).unwrap();
    let mut checked = 0;
    for i in 0..10u64 {
        let view = sample_view(&SampleRanges::GSV, derive_seed(3, i), 256, 256).unwrap();
        let g = camera_to_calib(&view.camera).unwrap();
        for offset in [-12.0, 0.0, 14.0] {
            let lon = (view.yaw_deg + offset).to_radians();
            let pano = stripe_panorama(4096, &[lon], 0.5f64.to_radians());
            let img = rectify_equirect(&pano, &view.camera, view.yaw_deg);
            let Some((_, seg)) = fit_stripe(&img, 0, 256) else {
                continue;
            };
            let set = label_segments(&[seg], &g.zenith, &g.zenith, None, &frame, &t);
            assert_eq!(
                set.cz[0],
                LineLabel::Convergent,
                "view {i}, offset {offset}"
            );
            checked += 1;
        }
    }
    assert!(checked >= 20, "only {checked} stripes checked");
}

#[test]
fn roll_half_turn_flips_image() {
    let pano = vpcal_core::synth::synthetic_panorama(1024);
    let a = rectify_equirect(
        &pano,
        &CameraFrame::new(60.0, 0.0, 0.0, 64, 64).unwrap(),
        10.0,
    );
    let b = rectify_equirect(
        &pano,
        &CameraFrame::new(60.0, 0.0, 180.0, 64, 64).unwrap(),
        10.0,
    );
    for j in 0..64 {
        for i in 0..64 {
            let (p, q) = (a.get_pixel(i, j).0, b.get_pixel(63 - i, 63 - j).0);
            assert!(p.iter().zip(q).all(|(x, y)| x.abs_diff(y) <= 1));
        }
    }
}

#[test]
fn rectification_is_deterministic() {
    let pano = vpcal_core::synth::synthetic_panorama(1024);
    let view = sample_view(&SampleRanges::SUN360, 99, 128, 128).unwrap();
    let a = rectify_equirect(&pano, &view.camera, view.yaw_deg);
    let b = rectify_equirect(&pano, &view.camera, view.yaw_deg);
    assert_eq!(a.as_raw(), b.as_raw());
}

#[test]
fn ray_round_trip_ten_thousand_pixels() {
    for i in 0..100u64 {
        let view = sample_view(&SampleRanges::SUN360, derive_seed(5, i), 512, 512).unwrap();
        let rays = ViewRays::new(&view.camera, view.yaw_deg);
        for k in 0..100u32 {
            let (x, y) = (
                f64::from(k * 37 % 512) + 0.5,
                f64::from(k * 101 % 512) + 0.5,
            );
            let r = rays.ray(x, y);
            let (lon, lat) = ray_to_lonlat(&r);
            assert!((lonlat_to_ray(lon, lat) - r).norm() < 1e-9);
        }
    }
}
