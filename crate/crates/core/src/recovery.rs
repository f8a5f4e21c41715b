//! From a refined illumination map to the enhanced image: gamma on the map,
//! division by the map, optional luma denoising, and a darkness-weighted
//! blend of the denoised and undenoised results.

use std::path::Path;
use std::process::Command;

use crate::color::{rgb_to_ycbcr, ycbcr_to_rgb};
use crate::error::{Error, Result};
use crate::image::{GrayMap, RgbImage, ValueRange};
use crate::io::{load_gray, save_gray_scaled};
use crate::refine::gaussian_taps;
use crate::window::correlate_separable;

/// Pointwise `T^gamma`.
pub fn gamma_adjust(tmap: &GrayMap, gamma: f64) -> Result<GrayMap> {
    if gamma.is_nan() || gamma <= 0.0 {
        return Err(Error::Argument(format!("gamma must be > 0, got {gamma}")));
    }
    if tmap.min() <= 0.0 || tmap.max() > 1.0 {
        return Err(Error::Argument(
            "gamma adjustment expects illumination in (0, 1]".into(),
        ));
    }
    let range = tmap.range();
    let range = if range.lo > 0.0 && range.hi <= 1.0 {
        ValueRange::new(range.lo.powf(gamma), range.hi.powf(gamma))
    } else {
        ValueRange::UNIT
    };
    let data = tmap.values().iter().map(|t| t.powf(gamma)).collect();
    GrayMap::from_clamped(tmap.height(), tmap.width(), data, range)
}

/// `L / (T + epsilon)` per channel, without clamping.
pub fn reflectance_unclamped(
    img: &RgbImage,
    tmap: &GrayMap,
    epsilon: f64,
) -> Result<Vec<[f64; 3]>> {
    Error::check_dims(img.dims(), tmap.dims())?;
    Ok(img
        .pixels()
        .iter()
        .zip(tmap.values())
        .map(|(px, t)| {
            let d = t + epsilon;
            px.map(|v| v / d)
        })
        .collect())
}

/// `L / (T + epsilon)` per channel, clamped to `[0, 1]`.
pub fn recover_reflectance(img: &RgbImage, tmap: &GrayMap, epsilon: f64) -> Result<RgbImage> {
    let data = reflectance_unclamped(img, tmap, epsilon)?;
    RgbImage::from_clamped(img.height(), img.width(), data)
}

/// Which denoiser runs on the luma channel.
#[derive(Debug, Clone, PartialEq)]
pub enum DenoiserSpec {
    None,
    /// Gaussian blur of Y with the given standard deviation in pixels.
    Gaussian {
        strength: f64,
    },
    /// Shell command template with `{in}` and `{out}` placeholders. It gets
    /// an 8-bit grayscale PNG of Y and must write one back.
    External {
        command: String,
    },
}

impl DenoiserSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            DenoiserSpec::Gaussian { strength } if strength.is_nan() || *strength < 0.0 => Err(
                Error::Argument(format!("denoise strength must be >= 0, got {strength}")),
            ),
            DenoiserSpec::External { command } if command.trim().is_empty() => Err(
                Error::Argument("external denoiser command must not be empty".into()),
            ),
            _ => Ok(()),
        }
    }

    pub fn is_enabled(&self) -> bool {
        !matches!(self, DenoiserSpec::None)
    }
}

/// Gaussian blur with clipped, renormalized borders so constants stay fixed.
pub fn gaussian_blur(map: &GrayMap, sigma: f64) -> Result<GrayMap> {
    if sigma == 0.0 {
        return Ok(map.clone());
    }
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::Argument(format!(
            "blur sigma must be >= 0, got {sigma}"
        )));
    }
    let radius = ((3.0 * sigma).ceil() as usize).max(1);
    let taps = gaussian_taps(sigma, radius);
    let (h, w) = map.dims();
    let (blurred, mass) = correlate_separable(map.values(), h, w, &taps);
    let data = blurred.iter().zip(&mass).map(|(v, m)| v / m).collect();
    GrayMap::from_clamped(h, w, data, map.range())
}

fn shell_quote(path: &Path) -> String {
    format!("'{}'", path.display().to_string().replace('\'', r"'\''"))
}

fn run_external(y: &GrayMap, template: &str) -> Result<GrayMap> {
    let dir = tempfile::Builder::new()
        .prefix("lime-denoise-")
        .tempdir()
        .map_err(|e| Error::ExternalTool(format!("cannot create temp dir: {e}")))?;
    let input = dir.path().join("y_in.png");
    let output = dir.path().join("y_out.png");
    save_gray_scaled(y, 0.0, 1.0, &input)?;
    let command = template
        .replace("{in}", &shell_quote(&input))
        .replace("{out}", &shell_quote(&output));
    let status = Command::new("sh")
        .arg("-c")
        .arg(&command)
        .status()
        .map_err(|e| Error::ExternalTool(format!("cannot spawn `{command}`: {e}")))?;
    if !status.success() {
        return Err(Error::ExternalTool(format!(
            "`{command}` exited with {status}"
        )));
    }
    let result = load_gray(&output, ValueRange::UNIT)
        .map_err(|e| Error::ExternalTool(format!("unreadable denoiser output: {e}")))?;
    if result.dims() != y.dims() {
        return Err(Error::ExternalTool(format!(
            "denoiser returned {:?}, expected {:?}",
            result.dims(),
            y.dims()
        )));
    }
    Ok(result)
}

/// Denoises the luma channel only; chroma passes through untouched.
pub fn denoise(img: &RgbImage, spec: &DenoiserSpec) -> Result<RgbImage> {
    spec.validate()?;
    let (y, cb, cr) = rgb_to_ycbcr(img);
    let y = match spec {
        DenoiserSpec::None => return Ok(img.clone()),
        DenoiserSpec::Gaussian { strength } => gaussian_blur(&y, *strength)?,
        DenoiserSpec::External { command } => run_external(&y, command)?,
    };
    ycbcr_to_rgb(&y, &cb, &cr)
}

/// `I ∘ T + I_d ∘ (1 − T)`: bright pixels keep the undenoised detail, dark
/// ones take the denoised signal.
pub fn recompose(enhanced: &RgbImage, denoised: &RgbImage, tmap: &GrayMap) -> Result<RgbImage> {
    Error::check_dims(enhanced.dims(), denoised.dims())?;
    Error::check_dims(enhanced.dims(), tmap.dims())?;
    if tmap.min() < 0.0 || tmap.max() > 1.0 {
        return Err(Error::Argument(
            "recomposition weights must lie in [0, 1]".into(),
        ));
    }
    let data = enhanced
        .pixels()
        .iter()
        .zip(denoised.pixels())
        .zip(tmap.values())
        .map(|((i, d), &t)| {
            let mut out = [0.0; 3];
            for c in 0..3 {
                out[c] = i[c] * t + d[c] * (1.0 - t);
            }
            out
        })
        .collect();
    RgbImage::from_clamped(enhanced.height(), enhanced.width(), data)
}
