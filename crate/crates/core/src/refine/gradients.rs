use crate::image::{GrayMap, ValueRange};

/// Forward differences of a map. `gh` differences along columns (zero in the
/// last column), `gv` along rows (zero in the last row).
#[derive(Debug, Clone, PartialEq)]
pub struct GradientMaps {
    pub gh: GrayMap,
    pub gv: GrayMap,
}

impl GradientMaps {
    pub fn dims(&self) -> (usize, usize) {
        self.gh.dims()
    }
}

/// Horizontal forward difference of a row-major vector; zero in the last column.
pub(crate) fn forward_h(t: &[f64], height: usize, width: usize) -> Vec<f64> {
    let mut out = vec![0.0; t.len()];
    for i in 0..height {
        let row = i * width;
        for j in 0..width.saturating_sub(1) {
            out[row + j] = t[row + j + 1] - t[row + j];
        }
    }
    out
}

/// Vertical forward difference; zero in the last row.
pub(crate) fn forward_v(t: &[f64], height: usize, width: usize) -> Vec<f64> {
    let mut out = vec![0.0; t.len()];
    for i in 0..height.saturating_sub(1) {
        for j in 0..width {
            out[i * width + j] = t[(i + 1) * width + j] - t[i * width + j];
        }
    }
    out
}

pub fn compute_gradients(tmap: &GrayMap) -> GradientMaps {
    let (h, w) = tmap.dims();
    let range = tmap.range();
    let span = range.hi - range.lo;
    let range = ValueRange::new(-span, span);
    let gh = forward_h(tmap.values(), h, w);
    let gv = forward_v(tmap.values(), h, w);
    GradientMaps {
        gh: GrayMap::new(h, w, gh, range).expect("difference of in-range values"),
        gv: GrayMap::new(h, w, gv, range).expect("difference of in-range values"),
    }
}
