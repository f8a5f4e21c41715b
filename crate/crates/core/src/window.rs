//! Windowed reductions over row-major grids with borders handled by clipping
//! the window to the image. A clipped square window is a rectangle, so every
//! reduction here runs as a horizontal pass followed by a vertical pass.

fn clipped(center: usize, radius: usize, len: usize) -> std::ops::Range<usize> {
    center.saturating_sub(radius)..(center + radius + 1).min(len)
}

fn separable_reduce(
    data: &[f64],
    height: usize,
    width: usize,
    radius: usize,
    init: f64,
    op: impl Fn(f64, f64) -> f64,
) -> Vec<f64> {
    let mut rows = vec![0.0; data.len()];
    for i in 0..height {
        let row = &data[i * width..(i + 1) * width];
        for j in 0..width {
            rows[i * width + j] = row[clipped(j, radius, width)]
                .iter()
                .fold(init, |a, &b| op(a, b));
        }
    }
    let mut out = vec![0.0; data.len()];
    for i in 0..height {
        let span = clipped(i, radius, height);
        for j in 0..width {
            out[i * width + j] = span.clone().fold(init, |a, k| op(a, rows[k * width + j]));
        }
    }
    out
}

pub(crate) fn window_max(data: &[f64], height: usize, width: usize, radius: usize) -> Vec<f64> {
    separable_reduce(data, height, width, radius, f64::NEG_INFINITY, f64::max)
}

pub(crate) fn window_min(data: &[f64], height: usize, width: usize, radius: usize) -> Vec<f64> {
    separable_reduce(data, height, width, radius, f64::INFINITY, f64::min)
}

pub(crate) fn window_mean(data: &[f64], height: usize, width: usize, radius: usize) -> Vec<f64> {
    let mut sums = separable_reduce(data, height, width, radius, 0.0, |a, b| a + b);
    for i in 0..height {
        let rows = clipped(i, radius, height).len();
        for j in 0..width {
            let count = rows * clipped(j, radius, width).len();
            sums[i * width + j] /= count as f64;
        }
    }
    sums
}

/// Correlates `data` with the outer product `taps ⊗ taps` (odd length,
/// centered), ignoring out-of-image samples. Returns the filtered values and,
/// per pixel, the kernel mass that fell inside the image.
pub(crate) fn correlate_separable(
    data: &[f64],
    height: usize,
    width: usize,
    taps: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    debug_assert!(taps.len() % 2 == 1);
    let r = taps.len() / 2;
    let mass_1d = |center: usize, len: usize| -> f64 {
        clipped(center, r, len).map(|k| taps[k + r - center]).sum()
    };

    let mut rows = vec![0.0; data.len()];
    for i in 0..height {
        let row = &data[i * width..(i + 1) * width];
        for j in 0..width {
            rows[i * width + j] = clipped(j, r, width).map(|k| taps[k + r - j] * row[k]).sum();
        }
    }
    let col_mass: Vec<f64> = (0..width).map(|j| mass_1d(j, width)).collect();
    let mut out = vec![0.0; data.len()];
    let mut mass = vec![0.0; data.len()];
    for i in 0..height {
        let row_mass = mass_1d(i, height);
        for j in 0..width {
            out[i * width + j] = clipped(i, r, height)
                .map(|k| taps[k + r - i] * rows[k * width + j])
                .sum();
            mass[i * width + j] = row_mass * col_mass[j];
        }
    }
    (out, mass)
}
