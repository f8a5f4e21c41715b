//! Directory mode: every PNG/PPM in the input directory, processed in
//! parallel, with a `timings.csv` beside the outputs.

use std::path::{Path, PathBuf};

use lime_core::{PipelineReport, Result};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::run::process_file;

pub const TIMINGS_FILE: &str = "timings.csv";

fn is_image(path: &Path) -> bool {
    path.is_file()
        && path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| matches!(e.to_ascii_lowercase().as_str(), "png" | "ppm"))
            .unwrap_or(false)
}

/// Image files directly inside `dir`, sorted by name.
pub fn collect_inputs(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| lime_core::Error::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| lime_core::Error::io(dir, e))?.path();
        if is_image(&path) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

pub struct BatchOutcome {
    pub succeeded: usize,
    pub failed: Vec<(PathBuf, lime_core::Error)>,
}

fn write_timings(
    path: &Path,
    rows: &[(PathBuf, PipelineReport)],
) -> std::result::Result<(), csv::Error> {
    let mut out = csv::Writer::from_path(path)?;
    out.write_record(["file", "height", "width", "stage", "millis"])?;
    for (file, report) in rows {
        let name = file
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let (h, w) = report.image_dims;
        for stage in &report.stages {
            out.write_record([
                name.clone(),
                h.to_string(),
                w.to_string(),
                stage.name.clone(),
                format!("{:.3}", stage.millis),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn run_batch(cfg: &RunConfig) -> std::result::Result<BatchOutcome, String> {
    let inputs = collect_inputs(&cfg.input).map_err(|e| e.to_string())?;
    if inputs.is_empty() {
        return Err(format!(
            "no inputs: no .png or .ppm files in {}",
            cfg.input.display()
        ));
    }
    std::fs::create_dir_all(&cfg.output)
        .map_err(|e| format!("cannot create {}: {e}", cfg.output.display()))?;

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cfg.jobs {
        builder = builder.num_threads(jobs);
    }
    let pool = builder.build().map_err(|e| e.to_string())?;

    let results: Vec<(PathBuf, Result<PipelineReport>)> = pool.install(|| {
        inputs
            .par_iter()
            .map(|input| {
                let stem = input.file_stem().unwrap_or_default().to_string_lossy();
                let output = cfg.output.join(format!("{stem}.png"));
                (input.clone(), process_file(cfg, input, &output))
            })
            .collect()
    });

    let mut done = Vec::new();
    let mut failed = Vec::new();
    for (input, result) in results {
        match result {
            Ok(report) => done.push((input, report)),
            Err(e) => failed.push((input, e)),
        }
    }
    write_timings(&cfg.output.join(TIMINGS_FILE), &done).map_err(|e| e.to_string())?;
    Ok(BatchOutcome {
        succeeded: done.len(),
        failed,
    })
}
