//! Enhancement by dehazing the inverted image.
//!
//! The inverted low-light image `1 − L` is treated as hazy:
//! `1 − L = (1 − I) T̃ + a (1 − T̃)`. With the dark-channel transmission
//! evaluated per pixel, `T̃ = 1 − 1/a + max_c L^c / a`, and the recovery
//! solved for `I` directly:
//!
//! ```text
//! I = (L − 1 + a) / (T̃ + ε) + (1 − a)
//! ```
//!
//! At `a = 1` this is exactly `L / (max_c L^c + ε)`.

use crate::error::{Error, Result};
use crate::image::{invert_image, GrayMap, RgbImage, ValueRange};
use crate::params::EnhanceParams;
use crate::window::window_min;

/// Radius of the dark-channel window used for atmospheric light (15x15).
pub const DARK_CHANNEL_RADIUS: usize = 7;
/// Fraction of brightest dark-channel pixels considered for atmospheric light.
pub const BRIGHTEST_FRACTION: f64 = 0.001;

/// Global atmospheric light, `0 < a <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtmosphericLight(f64);

impl AtmosphericLight {
    pub fn new(a: f64) -> Result<Self> {
        if a > 0.0 && a <= 1.0 {
            Ok(AtmosphericLight(a))
        } else {
            Err(Error::Argument(format!(
                "atmospheric light must be in (0, 1], got {a}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtmosphericEstimate {
    pub light: AtmosphericLight,
    /// Set when the hazy image was all zero and `a` fell back to 1.
    pub degenerate: bool,
}

/// Per-pixel channel minimum followed by a windowed minimum.
pub fn dark_channel(img: &RgbImage, radius: usize) -> GrayMap {
    let (h, w) = img.dims();
    let mins: Vec<f64> = img
        .pixels()
        .iter()
        .map(|p| p[0].min(p[1]).min(p[2]))
        .collect();
    GrayMap::new(h, w, window_min(&mins, h, w, radius), ValueRange::UNIT)
        .expect("min of unit values")
}

/// Takes the brightest 0.1% of the 15x15 dark channel of the hazy
/// (inverted) image and returns the highest mean-RGB intensity among them.
pub fn estimate_atmospheric_light(inverted: &RgbImage) -> AtmosphericEstimate {
    let dark = dark_channel(inverted, DARK_CHANNEL_RADIUS);
    let n = dark.len();
    let count = ((n as f64 * BRIGHTEST_FRACTION).ceil() as usize).clamp(1, n);
    let mut order: Vec<usize> = (0..n).collect();
    let values = dark.values();
    // Descending by dark value, ties by index so the choice is deterministic.
    let by_brightness = |a: &usize, b: &usize| values[*b].total_cmp(&values[*a]).then(a.cmp(b));
    if count < n {
        order.select_nth_unstable_by(count - 1, by_brightness);
    }
    let a = order[..count]
        .iter()
        .map(|&k| {
            let p = inverted.pixels()[k];
            (p[0] + p[1] + p[2]) / 3.0
        })
        .fold(0.0, f64::max)
        .min(1.0);
    if a > 0.0 {
        AtmosphericEstimate {
            light: AtmosphericLight(a),
            degenerate: false,
        }
    } else {
        AtmosphericEstimate {
            light: AtmosphericLight(1.0),
            degenerate: true,
        }
    }
}

/// `T̃ = 1 − 1/a + max_c L^c / a`, per pixel. Values may be negative for
/// `a < 1`; the declared range is `[1 − 1/a, 1]`.
pub fn dark_channel_transmission(img: &RgbImage, a: AtmosphericLight) -> GrayMap {
    let a = a.value();
    let base = 1.0 - 1.0 / a;
    let data = img
        .pixels()
        .iter()
        .map(|p| base + p[0].max(p[1]).max(p[2]) / a)
        .collect();
    GrayMap::from_clamped(img.height(), img.width(), data, ValueRange::new(base, 1.0))
        .expect("dims")
}

/// Evaluates the recovery formula without clamping.
pub fn dehaze_recover_unclamped(
    img: &RgbImage,
    tmap: &GrayMap,
    a: AtmosphericLight,
    epsilon: f64,
) -> Result<Vec<[f64; 3]>> {
    Error::check_dims(img.dims(), tmap.dims())?;
    let a = a.value();
    Ok(img
        .pixels()
        .iter()
        .zip(tmap.values())
        .map(|(px, t)| px.map(|l| (l - 1.0 + a) / (t + epsilon) + (1.0 - a)))
        .collect())
}

pub fn dehaze_recover(
    img: &RgbImage,
    tmap: &GrayMap,
    a: AtmosphericLight,
    epsilon: f64,
) -> Result<RgbImage> {
    let data = dehaze_recover_unclamped(img, tmap, a, epsilon)?;
    RgbImage::from_clamped(img.height(), img.width(), data)
}

/// Dehazing with a given atmospheric light.
pub fn dehaze_enhance_with(
    img: &RgbImage,
    a: AtmosphericLight,
    params: &EnhanceParams,
) -> Result<RgbImage> {
    let tmap = dark_channel_transmission(img, a);
    dehaze_recover(img, &tmap, a, params.epsilon)
}

/// Inverts, estimates the atmospheric light on the inverted image, and
/// recovers. The recovery formula already folds in both inversions, so it is
/// evaluated on the original image.
pub fn dehaze_enhance(
    img: &RgbImage,
    params: &EnhanceParams,
) -> Result<(RgbImage, AtmosphericEstimate)> {
    let estimate = estimate_atmospheric_light(&invert_image(img));
    let out = dehaze_enhance_with(img, estimate.light, params)?;
    Ok((out, estimate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::illumination::initial_illumination;
    use crate::recovery::reflectance_unclamped;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_image(seed: u64, h: usize, w: usize) -> RgbImage {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        RgbImage::from_fn(h, w, |_, _| [rng.random(), rng.random(), rng.random()]).unwrap()
    }

    #[test]
    fn atmospheric_light_of_constant_images() {
        for g in [0.3, 0.77, 1.0] {
            let img = RgbImage::filled(20, 30, [g; 3]).unwrap();
            let est = estimate_atmospheric_light(&img);
            assert!((est.light.value() - g).abs() < 1e-15);
            assert!(!est.degenerate);
        }
    }

    #[test]
    fn all_zero_is_degenerate() {
        let img = RgbImage::filled(5, 5, [0.0; 3]).unwrap();
        let est = estimate_atmospheric_light(&img);
        assert_eq!(est.light.value(), 1.0);
        assert!(est.degenerate);
    }

    #[test]
    fn picks_brightest_dark_region() {
        // Bright gray patch in a dark frame: the patch wins.
        let img = RgbImage::from_fn(40, 40, |i, j| {
            if (10..30).contains(&i) && (10..30).contains(&j) {
                [0.9, 0.8, 0.85]
            } else {
                [0.1; 3]
            }
        })
        .unwrap();
        let a = estimate_atmospheric_light(&img).light.value();
        assert!((a - 0.85).abs() < 1e-12, "{a}");
    }

    #[test]
    fn transmission_examples() {
        let img = RgbImage::new(1, 2, vec![[1.0; 3], [0.0; 3]]).unwrap();
        let t = dark_channel_transmission(&img, AtmosphericLight::new(0.95).unwrap());
        assert!((t.values()[0] - 1.0).abs() < 1e-15);
        assert!((t.values()[1] - (1.0 - 1.0 / 0.95)).abs() < 1e-15);
        assert!(t.values()[1] < 0.0);
    }

    #[test]
    fn unit_light_transmission_is_initial_map() {
        let img = random_image(10, 9, 11);
        let t = dark_channel_transmission(&img, AtmosphericLight::new(1.0).unwrap());
        assert_eq!(t.values(), initial_illumination(&img).values());
    }

    #[test]
    fn white_pixel_recovery() {
        let img = RgbImage::filled(1, 1, [1.0; 3]).unwrap();
        let a = AtmosphericLight::new(1.0).unwrap();
        let t = dark_channel_transmission(&img, a);
        let out = dehaze_recover_unclamped(&img, &t, a, 1e-3).unwrap()[0];
        for v in out {
            assert!((v - 1.0 / 1.001).abs() < 1e-15);
        }
    }

    #[test]
    fn unit_light_matches_reflectance_recovery() {
        let img = random_image(11, 12, 12);
        let a = AtmosphericLight::new(1.0).unwrap();
        let t = initial_illumination(&img);
        let lhs =
            dehaze_recover_unclamped(&img, &dark_channel_transmission(&img, a), a, 1e-3).unwrap();
        let rhs = reflectance_unclamped(&img, &t, 1e-3).unwrap();
        for (p, q) in lhs.iter().zip(&rhs) {
            for c in 0..3 {
                assert!((p[c] - q[c]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn enhance_matches_explicit_inverted_dehaze() {
        // Oracle: dehaze 1 − L with the textbook J = (H − a)/(T̃ + ε) + a and
        // invert the result.
        let img = random_image(12, 10, 10).map_channels(|v| 0.3 * v);
        let params = EnhanceParams::default();
        let (out, est) = dehaze_enhance(&img, &params).unwrap();
        let a = est.light.value();
        let hazy = invert_image(&img);
        for (k, h) in hazy.pixels().iter().enumerate() {
            let t = 1.0 - h[0].min(h[1]).min(h[2]) / a;
            for (got, hc) in out.pixels()[k].iter().zip(h) {
                let j = (hc - a) / (t + params.epsilon) + a;
                let expect = (1.0 - j).clamp(0.0, 1.0);
                assert!((got - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gray_half_image_is_bounded() {
        let img = RgbImage::filled(8, 8, [0.5; 3]).unwrap();
        let (out, _) = dehaze_enhance(&img, &EnhanceParams::default()).unwrap();
        assert!(out
            .pixels()
            .iter()
            .flatten()
            .all(|v| v.is_finite() && (0.0..=1.0).contains(v)));
    }

    #[test]
    fn invalid_light_rejected() {
        assert!(AtmosphericLight::new(0.0).is_err());
        assert!(AtmosphericLight::new(1.01).is_err());
    }
}
