use crate::error::{Error, Result};
use crate::image::{GrayMap, ValueRange};
use crate::params::EnhanceParams;
use crate::refine::gradients::GradientMaps;
use crate::window::correlate_separable;

/// Square, normalized Gaussian window of side `2 * radius + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianKernel {
    radius: usize,
    values: Vec<f64>,
}

impl GaussianKernel {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn side(&self) -> usize {
        2 * self.radius + 1
    }

    /// Weight at offset `(dy, dx)` from the center.
    pub fn at(&self, dy: isize, dx: isize) -> f64 {
        let r = self.radius as isize;
        assert!(dy.abs() <= r && dx.abs() <= r, "offset outside kernel");
        self.values[((dy + r) as usize) * self.side() + (dx + r) as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Normalized 1-D taps; the 2-D kernel is their outer product.
pub(crate) fn gaussian_taps(sigma: f64, radius: usize) -> Vec<f64> {
    let r = radius as isize;
    let taps: Vec<f64> = (-r..=r)
        .map(|d| (-((d * d) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.into_iter().map(|t| t / sum).collect()
}

pub fn gaussian_kernel(sigma: f64, radius: usize) -> Result<GaussianKernel> {
    if sigma.is_nan() || sigma <= 0.0 || radius < 1 {
        return Err(Error::Argument(format!(
            "gaussian kernel needs sigma > 0 and radius >= 1 (got {sigma}, {radius})"
        )));
    }
    let r = radius as isize;
    let mut values = Vec::with_capacity((2 * radius + 1).pow(2));
    for dy in -r..=r {
        for dx in -r..=r {
            values.push((-((dx * dx + dy * dy) as f64) / (2.0 * sigma * sigma)).exp());
        }
    }
    let sum: f64 = values.iter().sum();
    values.iter_mut().for_each(|v| *v /= sum);
    Ok(GaussianKernel { radius, values })
}

/// Horizontal and vertical smoothness weights. Strictly positive and finite.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMaps {
    pub w_h: GrayMap,
    pub w_v: GrayMap,
}

impl WeightMaps {
    /// All-ones weights: turns the refinement into plain ℓ2-loss TV.
    pub fn uniform(height: usize, width: usize) -> WeightMaps {
        let ones = GrayMap::filled(height, width, 1.0, ValueRange::POSITIVE).expect("dims");
        WeightMaps {
            w_h: ones.clone(),
            w_v: ones,
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.w_h.dims()
    }
}

fn weight_map(grad: &GrayMap, taps: &[f64], epsilon: f64) -> GrayMap {
    let (h, w) = grad.dims();
    let (smoothed, mass) = correlate_separable(grad.values(), h, w, taps);
    let data = smoothed
        .iter()
        .zip(&mass)
        .map(|(g, s)| s / (g.abs() + epsilon))
        .collect();
    GrayMap::new(h, w, data, ValueRange::POSITIVE).expect("weights are positive")
}

/// Structure-aware weights: the in-image Gaussian mass around `x` divided by
/// the magnitude of the Gaussian-windowed gradient sum at `x` plus epsilon.
/// Textured regions, where gradient signs cancel inside the window, get
/// large weights; coherent edges get small ones.
pub fn compute_weights(grads: &GradientMaps, params: &EnhanceParams) -> WeightMaps {
    let taps = gaussian_taps(params.sigma, params.kernel_radius);
    WeightMaps {
        w_h: weight_map(&grads.gh, &taps, params.epsilon),
        w_v: weight_map(&grads.gv, &taps, params.epsilon),
    }
}
