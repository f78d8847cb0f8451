use std::path::Path;

use rayon::prelude::*;
use rayon::ThreadPool;
use vpcal_core::camera_to_calib;
use vpcal_core::synth::scene::room_segments;
use vpcal_core::synth::{
    derive_seed, format_lsd, manifest_string, rectify_equirect, sample_view, save_png,
    synthetic_panorama, write_atomic, Panorama, Range, Room, SampleRanges, SceneRecord,
};

use crate::config::{file_digest, Echo, PanoramaSource, SynthConfig};
use crate::{files, report_record_errors, CliError, Profile, SynthArgs};

fn resolve_ranges(a: &SynthArgs) -> Result<(String, SampleRanges), CliError> {
    let given = [a.fov, a.pitch, a.roll];
    let ranges = match a.profile {
        Profile::Gsv | Profile::Sun360 => {
            if given.iter().any(Option::is_some) {
                return Err(CliError::Config(
                    "--fov/--pitch/--roll require --profile custom".into(),
                ));
            }
            if a.profile == Profile::Gsv {
                SampleRanges::GSV
            } else {
                SampleRanges::SUN360
            }
        }
        Profile::Custom => {
            let [Some(fov), Some(pitch), Some(roll)] = given else {
                return Err(CliError::Config(
                    "--profile custom needs --fov, --pitch and --roll".into(),
                ));
            };
            let r = |(lo, hi): (f64, f64)| Range::new(lo, hi);
            SampleRanges {
                fov: r(fov),
                pitch: r(pitch),
                roll: r(roll),
            }
        }
    };
    ranges.validate()?;
    let name = format!("{:?}", a.profile).to_lowercase();
    Ok((name, ranges))
}

pub(crate) fn run(a: &SynthArgs, pool: &ThreadPool) -> Result<(), CliError> {
    let (profile, ranges) = resolve_ranges(a)?;
    if a.size < 2 {
        return Err(CliError::Config(format!(
            "image size {} is too small",
            a.size
        )));
    }
    let (pano, source) = match &a.panorama {
        Some(p) => (
            Panorama::open(p)?,
            PanoramaSource::File {
                path: p.display().to_string(),
                sha256: file_digest(p)?,
            },
        ),
        None => {
            if a.pano_width < 8 || !a.pano_width.is_multiple_of(2) {
                return Err(CliError::Config(
                    "--pano-width must be even and >= 8".into(),
                ));
            }
            (
                synthetic_panorama(a.pano_width),
                PanoramaSource::Builtin {
                    width: a.pano_width,
                },
            )
        }
    };
    let room_lines = matches!(source, PanoramaSource::Builtin { .. });
    let echo = Echo::new(SynthConfig {
        command: "synth".into(),
        profile,
        ranges,
        seed: a.seed,
        num: a.num,
        size: a.size,
        panorama: source,
    });
    std::fs::create_dir_all(&a.out).map_err(|e| CliError::io(&a.out, e))?;

    let results: Vec<Result<SceneRecord, CliError>> = pool.install(|| {
        (0..a.num)
            .into_par_iter()
            .map(|i| synth_one(i, &echo, &pano, room_lines, &a.out))
            .collect()
    });
    let mut records = Vec::with_capacity(results.len());
    let mut errors = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) => errors.push((record_id(i), e)),
        }
    }
    write_atomic(&a.out.join(files::SYNTH_CONFIG), echo.to_json().as_bytes())?;
    write_atomic(
        &a.out.join(files::MANIFEST),
        manifest_string(&records).as_bytes(),
    )?;
    log::info!("wrote {} records to {}", records.len(), a.out.display());
    report_record_errors(&a.out, errors)
}

pub(crate) fn record_id(i: usize) -> String {
    format!("{i:06}")
}

fn synth_one(
    index: usize,
    echo: &Echo<SynthConfig>,
    pano: &Panorama,
    room_lines: bool,
    out: &Path,
) -> Result<SceneRecord, CliError> {
    let cfg = &echo.config;
    let seed = derive_seed(cfg.seed, index as u64);
    let view = sample_view(&cfg.ranges, seed, cfg.size, cfg.size)?;
    let calib = camera_to_calib(&view.camera)?;
    let id = record_id(index);

    let image = format!("images/{id}.png");
    let img = rectify_equirect(pano, &view.camera, view.yaw_deg);
    save_png(
        &img,
        &out.join(&image),
        &[("config_hash", &echo.config_hash)],
    )?;
    let lines = format!("lines/{id}.txt");
    if room_lines {
        let segs = room_segments(&Room::default(), &view.camera, view.yaw_deg);
        let header = [
            format!("config_hash {}", echo.config_hash),
            "x1 y1 x2 y2".to_string(),
        ];
        write_atomic(&out.join(&lines), format_lsd(&segs, &header).as_bytes())?;
    }
    Ok(SceneRecord {
        index,
        id: id.clone(),
        image,
        lines,
        labels: format!("labels/{id}.txt"),
        pseudo_vps: format!("pseudo_vps/{id}.json"),
        seed,
        yaw_deg: view.yaw_deg,
        camera: view.camera,
        calib,
        fov_axis: "vertical".into(),
        config_hash: echo.config_hash.clone(),
    })
}
