use crate::error::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 0.15;
pub const DEFAULT_SIGMA: f64 = 2.0;
pub const DEFAULT_GAMMA: f64 = 0.8;
pub const DEFAULT_EPSILON: f64 = 1e-3;
pub const DEFAULT_SOLVER_TOL: f64 = 1e-6;
pub const DEFAULT_SOLVER_MAX_ITER: usize = 5000;

/// Gaussian truncation radius used when none is given: `ceil(2 sigma)`.
pub fn default_kernel_radius(sigma: f64) -> usize {
    ((2.0 * sigma).ceil() as usize).max(1)
}

/// Preconditioner for the conjugate-gradient solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Preconditioner {
    /// Inverse diagonal. Cheap per iteration, but needs thousands of
    /// iterations on megapixel images.
    Jacobi,
    /// Row-sum-preserving zero-fill incomplete Cholesky.
    #[default]
    ModifiedIncompleteCholesky,
}

/// Every tunable of the enhancement pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnhanceParams {
    /// Weight of the smoothness term against fidelity to the initial map.
    pub alpha: f64,
    /// Standard deviation of the Gaussian window in the weight construction.
    pub sigma: f64,
    /// Stabilizer added to every denominator.
    pub epsilon: f64,
    /// Exponent applied to the refined illumination map.
    pub gamma: f64,
    /// Relative residual at which the linear solve stops.
    pub solver_tol: f64,
    pub solver_max_iter: usize,
    /// Truncation radius of the Gaussian window.
    pub kernel_radius: usize,
    pub preconditioner: Preconditioner,
}

impl Default for EnhanceParams {
    fn default() -> Self {
        EnhanceParams {
            alpha: DEFAULT_ALPHA,
            sigma: DEFAULT_SIGMA,
            epsilon: DEFAULT_EPSILON,
            gamma: DEFAULT_GAMMA,
            solver_tol: DEFAULT_SOLVER_TOL,
            solver_max_iter: DEFAULT_SOLVER_MAX_ITER,
            kernel_radius: default_kernel_radius(DEFAULT_SIGMA),
            preconditioner: Preconditioner::default(),
        }
    }
}

impl EnhanceParams {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            (
                self.alpha >= 0.0 && self.alpha.is_finite(),
                "alpha must be >= 0",
            ),
            (
                self.sigma > 0.0 && self.sigma.is_finite(),
                "sigma must be > 0",
            ),
            (
                self.epsilon > 0.0 && self.epsilon.is_finite(),
                "epsilon must be > 0",
            ),
            (
                self.gamma > 0.0 && self.gamma.is_finite(),
                "gamma must be > 0",
            ),
            (self.solver_tol > 0.0, "solver tolerance must be > 0"),
            (self.kernel_radius >= 1, "kernel radius must be >= 1"),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, msg)) => Err(Error::Argument((*msg).to_string())),
            None => Ok(()),
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }
}
