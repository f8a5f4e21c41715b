//! Slow, literal reference computations for checking `lime-core`.
//!
//! Nothing here calls into `lime-core`: every quantity is rebuilt from plain
//! slices with explicit loops or dense matrices, so agreement between the two
//! is evidence rather than tautology.

use nalgebra::{DMatrix, DVector};

/// Dense forward-difference operators `(Dh, Dv)` on an `h × w` row-major
/// grid, with zero rows at the last column / last row.
pub fn difference_operators(h: usize, w: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = h * w;
    let mut dh = DMatrix::zeros(n, n);
    let mut dv = DMatrix::zeros(n, n);
    for i in 0..h {
        for j in 0..w {
            let p = i * w + j;
            if j + 1 < w {
                dh[(p, p)] = -1.0;
                dh[(p, p + 1)] = 1.0;
            }
            if i + 1 < h {
                dv[(p, p)] = -1.0;
                dv[(p, p + w)] = 1.0;
            }
        }
    }
    (dh, dv)
}

/// Gradients of `t` through the dense operators.
pub fn gradients(t: &[f64], h: usize, w: usize) -> (Vec<f64>, Vec<f64>) {
    let (dh, dv) = difference_operators(h, w);
    let v = DVector::from_column_slice(t);
    (
        (&dh * &v).as_slice().to_vec(),
        (&dv * &v).as_slice().to_vec(),
    )
}

/// `(Dhᵀ v, Dvᵀ v)` through the dense operators.
pub fn adjoint_differences(v: &[f64], h: usize, w: usize) -> (Vec<f64>, Vec<f64>) {
    let (dh, dv) = difference_operators(h, w);
    let v = DVector::from_column_slice(v);
    (
        (dh.transpose() * &v).as_slice().to_vec(),
        (dv.transpose() * &v).as_slice().to_vec(),
    )
}

/// Literal double loop for the structure-aware weights:
/// `W(x) = Σ_{y∈Ω(x)} G(x,y) / (|Σ_{y∈Ω(x)} G(x,y) g(y)| + ε)`, with `G`
/// the Gaussian normalized over the full `(2r+1)²` window and `Ω(x)` clipped
/// to the image.
pub fn brute_force_weights(
    t_hat: &[f64],
    h: usize,
    w: usize,
    sigma: f64,
    radius: usize,
    epsilon: f64,
) -> (Vec<f64>, Vec<f64>) {
    let (gh, gv) = gradients(t_hat, h, w);
    let r = radius as isize;
    let mut total = 0.0;
    for dy in -r..=r {
        for dx in -r..=r {
            total += (-((dx * dx + dy * dy) as f64) / (2.0 * sigma * sigma)).exp();
        }
    }
    let kernel = |dy: isize, dx: isize| {
        (-((dx * dx + dy * dy) as f64) / (2.0 * sigma * sigma)).exp() / total
    };
    let mut w_h = vec![0.0; h * w];
    let mut w_v = vec![0.0; h * w];
    for i in 0..h as isize {
        for j in 0..w as isize {
            let (mut mass, mut sh, mut sv) = (0.0, 0.0, 0.0);
            for yi in (i - r)..=(i + r) {
                for yj in (j - r)..=(j + r) {
                    if yi < 0 || yj < 0 || yi >= h as isize || yj >= w as isize {
                        continue;
                    }
                    let g = kernel(yi - i, yj - j);
                    let q = yi as usize * w + yj as usize;
                    mass += g;
                    sh += g * gh[q];
                    sv += g * gv[q];
                }
            }
            let p = i as usize * w + j as usize;
            w_h[p] = mass / (sh.abs() + epsilon);
            w_v[p] = mass / (sv.abs() + epsilon);
        }
    }
    (w_h, w_v)
}

/// Everything that defines one instance of the quadratic refinement problem.
#[derive(Debug, Clone)]
pub struct Problem {
    pub h: usize,
    pub w: usize,
    pub t_hat: Vec<f64>,
    pub w_h: Vec<f64>,
    pub w_v: Vec<f64>,
    pub alpha: f64,
    pub epsilon: f64,
}

impl Problem {
    /// Λ weights `W / (|∇t̂| + ε)`.
    pub fn lambdas(&self) -> (Vec<f64>, Vec<f64>) {
        let (gh, gv) = gradients(&self.t_hat, self.h, self.w);
        let lh = self
            .w_h
            .iter()
            .zip(&gh)
            .map(|(w, g)| w / (g.abs() + self.epsilon))
            .collect();
        let lv = self
            .w_v
            .iter()
            .zip(&gv)
            .map(|(w, g)| w / (g.abs() + self.epsilon))
            .collect();
        (lh, lv)
    }

    /// The scalar objective evaluated term by term.
    pub fn objective(&self, t: &[f64]) -> f64 {
        let (lh, lv) = self.lambdas();
        let (th, tv) = gradients(t, self.h, self.w);
        let mut fidelity = 0.0;
        let mut smooth = 0.0;
        for p in 0..t.len() {
            fidelity += (self.t_hat[p] - t[p]).powi(2);
            smooth += lh[p] * th[p].powi(2) + lv[p] * tv[p].powi(2);
        }
        fidelity + self.alpha * smooth
    }

    /// `I + α (Dhᵀ Λh Dh + Dvᵀ Λv Dv)` by explicit dense products.
    pub fn dense_matrix(&self) -> DMatrix<f64> {
        let n = self.h * self.w;
        let (dh, dv) = difference_operators(self.h, self.w);
        let (lh, lv) = self.lambdas();
        let lh = DMatrix::from_diagonal(&DVector::from_vec(lh));
        let lv = DMatrix::from_diagonal(&DVector::from_vec(lv));
        DMatrix::identity(n, n)
            + (dh.transpose() * lh * &dh + dv.transpose() * lv * &dv) * self.alpha
    }

    /// Cholesky solve of the normal equations.
    pub fn dense_solve(&self) -> Vec<f64> {
        let a = self.dense_matrix();
        let chol = a.cholesky().expect("normal-equation matrix is SPD");
        chol.solve(&DVector::from_column_slice(&self.t_hat))
            .as_slice()
            .to_vec()
    }
}

/// Central finite differences of `f` at `x`.
pub fn finite_difference_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64], step: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|k| {
            probe[k] = x[k] + step;
            let up = f(&probe);
            probe[k] = x[k] - step;
            let down = f(&probe);
            probe[k] = x[k];
            (up - down) / (2.0 * step)
        })
        .collect()
}

/// Anisotropic total variation `Σ |∇h t| + |∇v t|`.
pub fn total_variation(t: &[f64], h: usize, w: usize) -> f64 {
    let (gh, gv) = gradients(t, h, w);
    gh.iter().chain(&gv).map(|g| g.abs()).sum()
}

/// `‖a − b‖∞`.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_operator_on_ramp() {
        let t: Vec<f64> = (0..6).map(|k| (k % 3) as f64).collect();
        let (gh, gv) = gradients(&t, 2, 3);
        assert_eq!(gh, vec![1.0, 1.0, 0.0, 1.0, 1.0, 0.0]);
        assert_eq!(gv, vec![0.0; 6]);
    }

    #[test]
    fn quadratic_gradient_check_of_the_helper() {
        let f = |x: &[f64]| x[0] * x[0] + 3.0 * x[1];
        let g = finite_difference_gradient(f, &[2.0, 1.0], 1e-5);
        assert!((g[0] - 4.0).abs() < 1e-8 && (g[1] - 3.0).abs() < 1e-8);
    }
}
