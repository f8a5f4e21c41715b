//! The normal equations of the quadratic refinement objective
//!
//! ```text
//! f(t) = ‖t − t̂‖² + α Σ_x [ Λh(x) (Dh t)(x)² + Λv(x) (Dv t)(x)² ]
//! Λh = W_h / (|∇h t̂| + ε),  Λv = W_v / (|∇v t̂| + ε)
//! ```
//!
//! Setting ∇f = 2 (A t − t̂) = 0 gives `A = I + α (Dhᵀ Λh Dh + Dvᵀ Λv Dv)`.
//! Each interior edge between neighbours p, q with coefficient c = αΛ(p)
//! contributes `c` to both diagonal entries and `−c` to the two off-diagonal
//! ones, so A is a weighted graph Laplacian plus identity: symmetric, with at
//! most five nonzeros per row and every eigenvalue ≥ 1.

use crate::error::{Error, Result};
use crate::image::GrayMap;
use crate::params::EnhanceParams;
use crate::refine::gradients::GradientMaps;
use crate::refine::weights::WeightMaps;

/// 5-point-stencil SPD system over an `height × width` grid.
///
/// Stored by edges: `east[p]` couples pixel p with its right neighbour and
/// `south[p]` with the one below; both hold the (non-positive) off-diagonal
/// entry. Edges leaving the grid are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSystem {
    height: usize,
    width: usize,
    diag: Vec<f64>,
    east: Vec<f64>,
    south: Vec<f64>,
    rhs: Vec<f64>,
}

impl SparseSystem {
    /// Builds the system from per-edge smoothness coefficients
    /// (already multiplied by α). Entries on the last column of `coef_h` and
    /// the last row of `coef_v` are ignored.
    pub fn from_edge_coefficients(
        height: usize,
        width: usize,
        coef_h: &[f64],
        coef_v: &[f64],
        rhs: Vec<f64>,
    ) -> Result<Self> {
        let n = height * width;
        if n == 0 || coef_h.len() != n || coef_v.len() != n || rhs.len() != n {
            return Err(Error::Argument(format!(
                "system over {height}x{width} needs {n} entries per field"
            )));
        }
        let mut diag = vec![1.0; n];
        let mut east = vec![0.0; n];
        let mut south = vec![0.0; n];
        for i in 0..height {
            for j in 0..width {
                let p = i * width + j;
                if j + 1 < width {
                    let c = coef_h[p];
                    east[p] = -c;
                    diag[p] += c;
                    diag[p + 1] += c;
                }
                if i + 1 < height {
                    let c = coef_v[p];
                    south[p] = -c;
                    diag[p] += c;
                    diag[p + width] += c;
                }
            }
        }
        Ok(SparseSystem {
            height,
            width,
            diag,
            east,
            south,
            rhs,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of unknowns.
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Off-diagonal entries coupling each pixel to its right neighbour.
    pub fn east(&self) -> &[f64] {
        &self.east
    }

    /// Off-diagonal entries coupling each pixel to the pixel below.
    pub fn south(&self) -> &[f64] {
        &self.south
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let (h, w) = (self.height, self.width);
        let n = self.n();
        assert!(x.len() == n && y.len() == n);
        if h < 3 || w < 2 {
            for (p, out) in y.iter_mut().enumerate() {
                *out = self.apply_at(x, p);
            }
            return;
        }
        for p in (0..w).chain(n - w..n) {
            y[p] = self.apply_at(x, p);
        }
        // Interior rows without branches: the east coefficient is zero on
        // the last column, so stepping across a row boundary adds nothing.
        let (lo, hi) = (w, n - w);
        let (d, e, s) = (&self.diag[lo..hi], &self.east[lo..hi], &self.south[lo..hi]);
        let (ew, sn) = (&self.east[lo - 1..hi - 1], &self.south[lo - w..hi - w]);
        let (xc, xe, xw) = (&x[lo..hi], &x[lo + 1..hi + 1], &x[lo - 1..hi - 1]);
        let (xs, xn) = (&x[lo + w..hi + w], &x[lo - w..hi - w]);
        for (k, out) in y[lo..hi].iter_mut().enumerate() {
            *out = d[k] * xc[k] + e[k] * xe[k] + ew[k] * xw[k] + s[k] * xs[k] + sn[k] * xn[k];
        }
    }

    fn apply_at(&self, x: &[f64], p: usize) -> f64 {
        let (w, n) = (self.width, self.n());
        let j = p % w;
        let mut acc = self.diag[p] * x[p];
        if j + 1 < w {
            acc += self.east[p] * x[p + 1];
        }
        if j > 0 {
            acc += self.east[p - 1] * x[p - 1];
        }
        if p + w < n {
            acc += self.south[p] * x[p + w];
        }
        if p >= w {
            acc += self.south[p - w] * x[p - w];
        }
        acc
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n()];
        self.apply(x, &mut y);
        y
    }

    /// Matrix entry `A[row, col]`.
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        let w = self.width;
        let (lo, hi) = (row.min(col), row.max(col));
        if row == col {
            self.diag[row]
        } else if hi == lo + 1 && hi % w != 0 {
            self.east[lo]
        } else if hi == lo + w {
            self.south[lo]
        } else {
            0.0
        }
    }

    /// Column indices of the structurally nonzero entries of `row`.
    pub fn row_pattern(&self, row: usize) -> Vec<usize> {
        let w = self.width;
        let n = self.n();
        let j = row % w;
        let mut cols = Vec::with_capacity(5);
        if row >= w {
            cols.push(row - w);
        }
        if j > 0 {
            cols.push(row - 1);
        }
        cols.push(row);
        if j + 1 < w {
            cols.push(row + 1);
        }
        if row + w < n {
            cols.push(row + w);
        }
        cols
    }

    /// Row-major dense copy; only sensible for small grids.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n();
        let mut dense = vec![0.0; n * n];
        for r in 0..n {
            for c in self.row_pattern(r) {
                dense[r * n + c] = self.entry(r, c);
            }
        }
        dense
    }

    /// `tᵀ A t − 2 tᵀ t̂ + ‖t̂‖²`, which equals the refinement objective.
    pub fn objective(&self, t: &[f64]) -> f64 {
        let at = self.mul(t);
        let quad: f64 = t.iter().zip(&at).map(|(a, b)| a * b).sum();
        let lin: f64 = t.iter().zip(&self.rhs).map(|(a, b)| a * b).sum();
        let cst: f64 = self.rhs.iter().map(|v| v * v).sum();
        quad - 2.0 * lin + cst
    }
}

/// Per-edge smoothness coefficients `Λ = W / (|g| + ε)`.
pub(crate) fn smoothness_coefficients(weights: &GrayMap, grad: &GrayMap, epsilon: f64) -> Vec<f64> {
    weights
        .values()
        .iter()
        .zip(grad.values())
        .map(|(w, g)| w / (g.abs() + epsilon))
        .collect()
}

pub fn assemble_system(
    tmap_hat: &GrayMap,
    weights: &WeightMaps,
    grads: &GradientMaps,
    params: &EnhanceParams,
) -> Result<SparseSystem> {
    let dims = tmap_hat.dims();
    Error::check_dims(dims, weights.w_h.dims())?;
    Error::check_dims(dims, weights.w_v.dims())?;
    Error::check_dims(dims, grads.gh.dims())?;
    Error::check_dims(dims, grads.gv.dims())?;
    let alpha = params.alpha;
    let scale = |lam: Vec<f64>| -> Vec<f64> { lam.into_iter().map(|l| alpha * l).collect() };
    let coef_h = scale(smoothness_coefficients(
        &weights.w_h,
        &grads.gh,
        params.epsilon,
    ));
    let coef_v = scale(smoothness_coefficients(
        &weights.w_v,
        &grads.gv,
        params.epsilon,
    ));
    SparseSystem::from_edge_coefficients(
        dims.0,
        dims.1,
        &coef_h,
        &coef_v,
        tmap_hat.values().to_vec(),
    )
}
