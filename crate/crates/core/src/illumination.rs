//! Initial illumination estimate and the structure-blind local refinements.

use crate::image::{GrayMap, RgbImage, ValueRange};
use crate::window;

/// Per-pixel maximum over the three channels.
pub fn initial_illumination(img: &RgbImage) -> GrayMap {
    let data = img
        .pixels()
        .iter()
        .map(|p| p[0].max(p[1]).max(p[2]))
        .collect();
    GrayMap::new(img.height(), img.width(), data, ValueRange::UNIT)
        .expect("max of unit values is a unit value")
}

/// Maximum over the `(2r+1)²` window around each pixel, clipped at borders.
pub fn local_max_refine(tmap: &GrayMap, radius: usize) -> GrayMap {
    let (h, w) = tmap.dims();
    let data = window::window_max(tmap.values(), h, w, radius);
    GrayMap::new(h, w, data, tmap.range()).expect("max stays within input range")
}

/// Mean over the clipped window; border pixels divide by the in-image count.
pub fn local_mean_refine(tmap: &GrayMap, radius: usize) -> GrayMap {
    let (h, w) = tmap.dims();
    let (lo, hi) = (tmap.min(), tmap.max());
    // Rounding in the sums can step a hair outside the input extremes.
    let data = window::window_mean(tmap.values(), h, w, radius)
        .into_iter()
        .map(|v| v.clamp(lo, hi))
        .collect();
    GrayMap::new(h, w, data, tmap.range()).expect("mean stays within input range")
}
