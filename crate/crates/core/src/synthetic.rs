//! Deterministic synthetic low-light scenes for tests, benchmarks and demos.
//!
//! A scene is a piecewise-constant reflectance (rectangles and discs over a
//! striped background) multiplied by a smooth, dim illumination field with a
//! little sensor noise on top.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::image::RgbImage;

struct Shape {
    kind: ShapeKind,
    color: [f64; 3],
}

enum ShapeKind {
    Rect {
        top: f64,
        left: f64,
        bottom: f64,
        right: f64,
    },
    Disc {
        cy: f64,
        cx: f64,
        r: f64,
    },
}

impl Shape {
    fn contains(&self, y: f64, x: f64) -> bool {
        match self.kind {
            ShapeKind::Rect {
                top,
                left,
                bottom,
                right,
            } => y >= top && y < bottom && x >= left && x < right,
            ShapeKind::Disc { cy, cx, r } => (y - cy).powi(2) + (x - cx).powi(2) <= r * r,
        }
    }
}

fn random_color(rng: &mut ChaCha8Rng) -> [f64; 3] {
    [
        rng.random_range(0.15..1.0),
        rng.random_range(0.15..1.0),
        rng.random_range(0.15..1.0),
    ]
}

/// A `height × width` low-light scene; the same seed gives the same image.
/// Channel values stay below roughly 0.4.
pub fn low_light_scene(seed: u64, height: usize, width: usize) -> RgbImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (hf, wf) = (height as f64, width as f64);

    let background = random_color(&mut rng);
    let stripe_period = rng.random_range(3.0..9.0);
    let shapes: Vec<Shape> = (0..rng.random_range(4..10))
        .map(|_| {
            let kind = if rng.random_bool(0.5) {
                let (y0, x0) = (rng.random_range(0.0..hf), rng.random_range(0.0..wf));
                ShapeKind::Rect {
                    top: y0,
                    left: x0,
                    bottom: y0 + rng.random_range(0.1..0.5) * hf,
                    right: x0 + rng.random_range(0.1..0.5) * wf,
                }
            } else {
                ShapeKind::Disc {
                    cy: rng.random_range(0.0..hf),
                    cx: rng.random_range(0.0..wf),
                    r: rng.random_range(0.05..0.25) * hf.min(wf),
                }
            };
            Shape {
                kind,
                color: random_color(&mut rng),
            }
        })
        .collect();

    let (ly, lx) = (rng.random_range(0.0..hf), rng.random_range(0.0..wf));
    let falloff = rng.random_range(0.3..0.8) * hf.max(wf);
    let (dim, bright) = (rng.random_range(0.02..0.06), rng.random_range(0.25..0.4));
    let noise = 0.004;

    let mut pixels = Vec::with_capacity(height * width);
    for i in 0..height {
        for j in 0..width {
            let (y, x) = (i as f64, j as f64);
            let mut refl = shapes
                .iter()
                .rev()
                .find(|s| s.contains(y, x))
                .map(|s| s.color)
                .unwrap_or(background);
            if shapes.iter().all(|s| !s.contains(y, x)) {
                let stripe = 0.85 + 0.15 * (std::f64::consts::TAU * x / stripe_period).sin();
                refl = refl.map(|v| v * stripe);
            }
            let d2 = ((y - ly).powi(2) + (x - lx).powi(2)) / (falloff * falloff);
            let light = dim + (bright - dim) * (-d2).exp();
            let px = refl.map(|r| (r * light + rng.random_range(-noise..noise)).clamp(0.0, 1.0));
            pixels.push(px);
        }
    }
    RgbImage::new(height, width, pixels).expect("values clamped into [0, 1]")
}

/// `count` scenes with consecutive seeds starting at `first_seed`.
pub fn corpus(first_seed: u64, count: usize, height: usize, width: usize) -> Vec<RgbImage> {
    (0..count as u64)
        .map(|k| low_light_scene(first_seed + k, height, width))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_dim() {
        let a = low_light_scene(7, 40, 50);
        assert_eq!(a, low_light_scene(7, 40, 50));
        assert_ne!(a, low_light_scene(8, 40, 50));
        let max = a.pixels().iter().flatten().fold(0.0f64, |m, &v| m.max(v));
        assert!(max < 0.45, "{max}");
        assert!(a.mean_luma() < 0.25);
    }
}
