use crate::error::{Error, Result};
use crate::image::{GrayMap, ValueRange};
use crate::params::{EnhanceParams, Preconditioner};
use crate::refine::system::SparseSystem;

/// Unclamped solution of the refinement system.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub values: Vec<f64>,
    pub iterations: usize,
    /// Final relative residual `‖A t − t̂‖ / ‖t̂‖`, recomputed from scratch.
    pub residual: f64,
}

/// Dot product with four interleaved partial sums (vectorizes; the fixed
/// association keeps results reproducible).
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let tail: f64 = ca
        .remainder()
        .iter()
        .zip(cb.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (u, v) in ca.zip(cb) {
        for k in 0..4 {
            acc[k] += u[k] * v[k];
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Modified incomplete Cholesky factor `M = (D + L) D⁻¹ (D + Lᵀ)` of a
/// 5-point system: `L` is the strictly lower part of `A`, and `D` is chosen
/// so that `M 1 = A 1`, i.e. the dropped fill-in is lumped onto the
/// diagonal. For `A = I + (graph Laplacian)` every pivot stays ≥ 1.
struct IncompleteCholesky {
    width: usize,
    inv_d: Vec<f64>,
    east: Vec<f64>,
    south: Vec<f64>,
}

impl IncompleteCholesky {
    fn new(system: &SparseSystem) -> Self {
        let (a, east, south) = (system.diagonal(), system.east(), system.south());
        let w = system.width();
        let mut inv_d = vec![0.0; a.len()];
        for p in 0..a.len() {
            let mut d = a[p];
            if p >= 1 {
                d -= east[p - 1] * (east[p - 1] + south[p - 1]) * inv_d[p - 1];
            }
            if p >= w {
                d -= south[p - w] * (south[p - w] + east[p - w]) * inv_d[p - w];
            }
            inv_d[p] = 1.0 / d;
        }
        IncompleteCholesky {
            width: w,
            inv_d,
            east: east.to_vec(),
            south: south.to_vec(),
        }
    }

    /// `z = M⁻¹ r` by a forward and a backward sweep. The east coefficient
    /// is zero on the last column, so the sweeps run straight across row
    /// boundaries.
    fn solve(&self, r: &[f64], z: &mut [f64]) {
        let (w, n) = (self.width, r.len());
        let (e, s, inv_d) = (&self.east, &self.south, &self.inv_d);
        // (I + L D⁻¹) u = r, storing D⁻¹ u in z
        z[0] = r[0] * inv_d[0];
        for p in 1..w.min(n) {
            z[p] = (r[p] - e[p - 1] * z[p - 1]) * inv_d[p];
        }
        for p in w..n {
            z[p] = (r[p] - s[p - w] * z[p - w] - e[p - 1] * z[p - 1]) * inv_d[p];
        }
        // (D + Lᵀ) z = u
        for p in (n.saturating_sub(w)..n.saturating_sub(1)).rev() {
            z[p] -= e[p] * z[p + 1] * inv_d[p];
        }
        for p in (0..n.saturating_sub(w)).rev() {
            z[p] -= (s[p] * z[p + w] + e[p] * z[p + 1]) * inv_d[p];
        }
    }
}

enum Precond {
    Jacobi(Vec<f64>),
    Mic(IncompleteCholesky),
}

impl Precond {
    fn new(system: &SparseSystem, kind: Preconditioner) -> Self {
        match kind {
            Preconditioner::Jacobi => {
                Precond::Jacobi(system.diagonal().iter().map(|d| 1.0 / d).collect())
            }
            Preconditioner::ModifiedIncompleteCholesky => {
                Precond::Mic(IncompleteCholesky::new(system))
            }
        }
    }

    fn solve(&self, r: &[f64], z: &mut [f64]) {
        match self {
            Precond::Jacobi(inv) => {
                for ((z, r), d) in z.iter_mut().zip(r).zip(inv) {
                    *z = r * d;
                }
            }
            Precond::Mic(ic) => ic.solve(r, z),
        }
    }
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn relative_residual(system: &SparseSystem, x: &[f64], b_norm: f64) -> f64 {
    let ax = system.mul(x);
    let r: f64 = ax
        .iter()
        .zip(system.rhs())
        .map(|(a, b)| (b - a) * (b - a))
        .sum();
    r.sqrt() / b_norm
}

/// Preconditioned conjugate gradient, started from the right-hand side.
/// Single-threaded with a fixed summation order, so results are bitwise
/// reproducible.
pub fn solve_system(system: &SparseSystem, params: &EnhanceParams) -> Result<Solution> {
    let n = system.n();
    let b = system.rhs();
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return Ok(Solution {
            values: vec![0.0; n],
            iterations: 0,
            residual: 0.0,
        });
    }
    let tol = params.solver_tol;
    let precond = Precond::new(system, params.preconditioner);

    let mut x = b.to_vec();
    let mut r: Vec<f64> = {
        let ax = system.mul(&x);
        b.iter().zip(&ax).map(|(b, a)| b - a).collect()
    };
    let mut z = vec![0.0; n];
    precond.solve(&r, &mut z);
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut rr = dot(&r, &r);
    let mut iterations = 0;

    while rr.sqrt() / b_norm > tol {
        if iterations >= params.solver_max_iter {
            return Err(Error::Convergence {
                iterations,
                residual: relative_residual(system, &x, b_norm),
                tol,
            });
        }
        system.apply(&p, &mut ap);
        let step = rz / dot(&p, &ap);
        for ((x, r), (p, ap)) in x.iter_mut().zip(r.iter_mut()).zip(p.iter().zip(&ap)) {
            *x += step * p;
            *r -= step * ap;
        }
        precond.solve(&r, &mut z);
        let rz_next = dot(&r, &z);
        rr = dot(&r, &r);
        let beta = rz_next / rz;
        rz = rz_next;
        for (p, z) in p.iter_mut().zip(&z) {
            *p = z + beta * *p;
        }
        iterations += 1;
    }

    Ok(Solution {
        residual: relative_residual(system, &x, b_norm),
        values: x,
        iterations,
    })
}

/// Solves and clamps the result into `[epsilon, 1]`.
pub fn solve_refinement(system: &SparseSystem, params: &EnhanceParams) -> Result<GrayMap> {
    let sol = solve_system(system, params)?;
    Ok(clamp_solution(system, sol.values, params.epsilon))
}

pub(crate) fn clamp_solution(system: &SparseSystem, values: Vec<f64>, epsilon: f64) -> GrayMap {
    GrayMap::from_clamped(
        system.height(),
        system.width(),
        values,
        ValueRange::new(epsilon, 1.0),
    )
    .expect("system dims are valid")
}
