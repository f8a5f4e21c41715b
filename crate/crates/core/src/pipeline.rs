//! The full enhancement: initial map, refinement, gamma, recovery, and
//! optional denoise + recomposition.

use crate::error::Result;
use crate::illumination::{initial_illumination, local_max_refine, local_mean_refine};
use crate::image::{GrayMap, RgbImage};
use crate::params::EnhanceParams;
use crate::recovery::{denoise, gamma_adjust, recompose, recover_reflectance, DenoiserSpec};
use crate::refine::{clamp_illumination, refine_with, WeightMaps, Weighting};
use crate::report::PipelineReport;

/// Window radius for the local max/mean refinements when none is given.
pub const DEFAULT_LOCAL_RADIUS: usize = 7;

/// How the initial map is turned into the final illumination map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefineMode {
    /// Use the per-pixel max-RGB map as is.
    None,
    /// Windowed maximum.
    Max { radius: usize },
    /// Windowed mean.
    Mean { radius: usize },
    /// Quadratic refinement with unit weights.
    Tv,
    /// Quadratic refinement with structure-aware weights.
    Lime,
}

/// Everything the pipeline produced, including the intermediate maps.
#[derive(Debug, Clone)]
pub struct Enhancement {
    pub image: RgbImage,
    pub report: PipelineReport,
    pub initial: GrayMap,
    /// Refined map clamped to `[epsilon, 1]`, before gamma.
    pub refined: GrayMap,
    /// Present for the solver-based modes.
    pub weights: Option<WeightMaps>,
}

pub fn enhance(
    img: &RgbImage,
    params: &EnhanceParams,
    denoiser: &DenoiserSpec,
    mode: RefineMode,
) -> Result<Enhancement> {
    params.validate()?;
    denoiser.validate()?;
    let mut report = PipelineReport::new(img.dims());

    let initial = report.time("initial-map", || initial_illumination(img));

    let (refined, weights) = report
        .time("refine", || -> Result<_> {
            let solve = |weighting| -> Result<_> {
                let r = refine_with(&initial, params, weighting)?;
                Ok((r.map, Some(r.weights), r.iterations, r.residual))
            };
            let (map, weights, iterations, residual) = match mode {
                RefineMode::None => (initial.clone(), None, 0, 0.0),
                RefineMode::Max { radius } => (local_max_refine(&initial, radius), None, 0, 0.0),
                RefineMode::Mean { radius } => (local_mean_refine(&initial, radius), None, 0, 0.0),
                RefineMode::Tv => solve(Weighting::Uniform)?,
                RefineMode::Lime => solve(Weighting::StructureAware)?,
            };
            Ok((
                clamp_illumination(&map, params.epsilon),
                weights,
                iterations,
                residual,
            ))
        })
        .map(|(map, weights, iterations, residual)| {
            report.solver_iterations = iterations;
            report.solver_residual = residual;
            (map, weights)
        })?;

    let adjusted = report.time("gamma", || gamma_adjust(&refined, params.gamma))?;
    let recovered = report.time("recover", || {
        recover_reflectance(img, &adjusted, params.epsilon)
    })?;

    let image = if denoiser.is_enabled() {
        let denoised = report.time("denoise", || denoise(&recovered, denoiser))?;
        report.time("recompose", || recompose(&recovered, &denoised, &refined))?
    } else {
        recovered
    };

    Ok(Enhancement {
        image,
        report,
        initial,
        refined,
        weights,
    })
}

pub fn enhance_pipeline(
    img: &RgbImage,
    params: &EnhanceParams,
    denoiser: &DenoiserSpec,
    mode: RefineMode,
) -> Result<(RgbImage, PipelineReport)> {
    enhance(img, params, denoiser, mode).map(|e| (e.image, e.report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn low_light(seed: u64, h: usize, w: usize, peak: f64) -> RgbImage {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        RgbImage::from_fn(h, w, |_, _| {
            [
                peak * rng.random::<f64>(),
                peak * rng.random::<f64>(),
                peak * rng.random::<f64>(),
            ]
        })
        .unwrap()
    }

    #[test]
    fn well_lit_image_is_nearly_unchanged() {
        let img = RgbImage::filled(6, 6, [1.0, 1.0, 1.0]).unwrap();
        let params = EnhanceParams::default().with_gamma(1.0);
        let (out, _) =
            enhance_pipeline(&img, &params, &DenoiserSpec::None, RefineMode::None).unwrap();
        for (a, b) in img.pixels().iter().zip(out.pixels()) {
            for c in 0..3 {
                assert!((a[c] - b[c]).abs() <= 2.0 * params.epsilon);
            }
        }
    }

    #[test]
    fn lime_with_zero_alpha_equals_none() {
        let img = low_light(1, 12, 10, 0.4);
        let params = EnhanceParams::default().with_alpha(0.0);
        let (a, _) =
            enhance_pipeline(&img, &params, &DenoiserSpec::None, RefineMode::Lime).unwrap();
        let (b, _) =
            enhance_pipeline(&img, &params, &DenoiserSpec::None, RefineMode::None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn report_stages() {
        let img = low_light(2, 10, 10, 0.3);
        let params = EnhanceParams::default();
        let (_, rep) =
            enhance_pipeline(&img, &params, &DenoiserSpec::None, RefineMode::Lime).unwrap();
        assert_eq!(
            rep.stage_names(),
            vec!["initial-map", "refine", "gamma", "recover"]
        );
        assert!(rep.solver_residual <= params.solver_tol);
        assert!(rep.solver_iterations > 0);
        let den = DenoiserSpec::Gaussian { strength: 1.0 };
        let (_, rep) = enhance_pipeline(&img, &params, &den, RefineMode::Lime).unwrap();
        assert_eq!(
            rep.stage_names(),
            vec![
                "initial-map",
                "refine",
                "gamma",
                "recover",
                "denoise",
                "recompose"
            ]
        );
    }

    #[test]
    fn every_mode_stays_in_bounds_and_brightens() {
        let img = low_light(3, 16, 14, 0.35);
        let params = EnhanceParams::default();
        for mode in [
            RefineMode::None,
            RefineMode::Max { radius: 2 },
            RefineMode::Mean { radius: 2 },
            RefineMode::Tv,
            RefineMode::Lime,
        ] {
            for den in [DenoiserSpec::None, DenoiserSpec::Gaussian { strength: 1.0 }] {
                let (out, _) = enhance_pipeline(&img, &params, &den, mode).unwrap();
                assert!(out
                    .pixels()
                    .iter()
                    .flatten()
                    .all(|v| (0.0..=1.0).contains(v)));
                assert!(out.mean_luma() >= img.mean_luma(), "{mode:?} {den:?}");
            }
        }
    }

    #[test]
    fn deterministic() {
        let img = low_light(4, 20, 20, 0.3);
        let params = EnhanceParams::default();
        let den = DenoiserSpec::Gaussian { strength: 1.0 };
        let a = enhance_pipeline(&img, &params, &den, RefineMode::Lime)
            .unwrap()
            .0;
        let b = enhance_pipeline(&img, &params, &den, RefineMode::Lime)
            .unwrap()
            .0;
        assert_eq!(a, b);
    }
}
