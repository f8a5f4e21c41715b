//! One image in, one image out.

use std::path::{Path, PathBuf};

use lime_core::baseline::{
    dark_channel_transmission, dehaze_recover, estimate_atmospheric_light, gamma_correct,
    histogram_equalize,
};
use lime_core::{enhance, invert_image, io, GrayMap, PipelineReport, Result, RgbImage};

use crate::config::{Method, RunConfig};

/// Intermediate maps worth writing with `--dump-maps`, keyed by suffix.
type Dumps = Vec<(&'static str, GrayMap)>;

fn run_method(
    cfg: &RunConfig,
    img: &RgbImage,
    report: &mut PipelineReport,
) -> Result<(RgbImage, Dumps)> {
    if let Some(mode) = cfg.refine_mode() {
        let e = enhance(img, &cfg.params, &cfg.denoiser, mode)?;
        report.stages.extend(e.report.stages);
        report.solver_iterations = e.report.solver_iterations;
        report.solver_residual = e.report.solver_residual;
        let mut dumps = vec![("that", e.initial)];
        if let Some(w) = e.weights {
            dumps.push(("w_h", w.w_h));
            dumps.push(("w_v", w.w_v));
        }
        dumps.push(("t", e.refined));
        return Ok((e.image, dumps));
    }
    match cfg.method {
        Method::Dehz => {
            let estimate = report.time("atmospheric-light", || {
                estimate_atmospheric_light(&invert_image(img))
            });
            if estimate.degenerate {
                eprintln!("warning: black image, atmospheric light defaults to 1");
            }
            let tmap = report.time("transmission", || {
                dark_channel_transmission(img, estimate.light)
            });
            let out = report.time("recover", || {
                dehaze_recover(img, &tmap, estimate.light, cfg.params.epsilon)
            })?;
            Ok((out, vec![("t", tmap)]))
        }
        Method::He => Ok((
            report.time("equalize", || histogram_equalize(img)),
            Vec::new(),
        )),
        Method::Gc => {
            let out = report.time("gamma", || gamma_correct(img, cfg.params.gamma))?;
            Ok((out, Vec::new()))
        }
        _ => unreachable!("refinement methods handled above"),
    }
}

fn dump_path(output: &Path, suffix: &str) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    output.with_file_name(format!("{stem}.{suffix}.png"))
}

/// Loads `input`, enhances it with the configured method and writes `output`.
pub fn process_file(cfg: &RunConfig, input: &Path, output: &Path) -> Result<PipelineReport> {
    let mut report = PipelineReport::default();
    let img = report.time("load", || io::load_image(input))?;
    report.image_dims = img.dims();

    let (out, dumps) = run_method(cfg, &img, &mut report)?;

    report.time("save", || -> Result<()> {
        if let Some(dir) = output.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| lime_core::Error::io(dir, e))?;
        }
        io::save_image(&out, output)?;
        if cfg.dump_maps {
            for (suffix, map) in &dumps {
                io::save_gray_map(map, dump_path(output, suffix))?;
            }
        }
        Ok(())
    })?;
    Ok(report)
}
