//! Histogram equalization and plain gamma correction.

use crate::color::{rgb_to_ycbcr, ycbcr_to_rgb};
use crate::image::{GrayMap, RgbImage, ValueRange};

pub const HISTOGRAM_BINS: usize = 256;

fn bin_of(v: f64, bins: usize) -> usize {
    ((v.clamp(0.0, 1.0) * (bins - 1) as f64).round() as usize).min(bins - 1)
}

/// Counts of `values` over `bins` equal-width bins of `[0, 1]`.
pub fn histogram(values: &[f64], bins: usize) -> Vec<usize> {
    let mut counts = vec![0; bins];
    for &v in values {
        counts[bin_of(v, bins)] += 1;
    }
    counts
}

/// Maps each value through the cumulative distribution of its 256-bin
/// histogram: `v ↦ #{pixels in bins ≤ bin(v)} / N`.
pub fn equalize_luma(y: &GrayMap) -> GrayMap {
    let counts = histogram(y.values(), HISTOGRAM_BINS);
    let n = y.len() as f64;
    let mut cdf = Vec::with_capacity(HISTOGRAM_BINS);
    let mut acc = 0usize;
    for c in counts {
        acc += c;
        cdf.push(acc as f64 / n);
    }
    let data = y
        .values()
        .iter()
        .map(|&v| cdf[bin_of(v, HISTOGRAM_BINS)])
        .collect();
    GrayMap::new(y.height(), y.width(), data, ValueRange::UNIT).expect("cdf lies in [0, 1]")
}

/// Equalizes Y; chroma is left as is.
pub fn histogram_equalize(img: &RgbImage) -> RgbImage {
    let (y, cb, cr) = rgb_to_ycbcr(img);
    ycbcr_to_rgb(&equalize_luma(&y), &cb, &cr).expect("planes share dims")
}

/// Per-channel `v^gamma`.
pub fn gamma_correct(img: &RgbImage, gamma: f64) -> crate::Result<RgbImage> {
    if gamma.is_nan() || gamma <= 0.0 {
        return Err(crate::Error::Argument(format!(
            "gamma must be > 0, got {gamma}"
        )));
    }
    Ok(img.map_channels(|v| v.powf(gamma)))
}
