//! Problem generators and ingestion: 1-D Gross-Pitaevskii discretization,
//! seeded random Stieltjes instances, and Matrix Market files.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    read_matrix_market, smallest_eigenpair, SymmetricSparseMatrix, DEFAULT_EIG_MAX_ITER,
    DEFAULT_EIG_TOL,
};
use crate::nonlinearity::Nonlinearity;
use crate::solver::{check_lambda, ProblemInstance};

/// Named trapping potential for the 1-D Gross-Pitaevskii discretization.
/// Only the quadratic well `V(t) = t^2` is supported; it is the one the
/// benchmark uses, and arbitrary potentials would not serialize into
/// configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Potential {
    #[default]
    Quadratic,
}

impl Potential {
    fn eval(self, t: f64) -> f64 {
        match self {
            Potential::Quadratic => t * t,
        }
    }
}

/// Finite-difference discretization of the 1-D Gross-Pitaevskii equation
/// `-x''(t) + V(t) x(t) + k x^3(t) = lambda x(t)` truncated to a finite
/// interval with homogeneous Dirichlet boundaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gp1dSpec {
    /// Interior grid points.
    pub n: usize,
    /// Truncation interval `(a, b)`.
    #[serde(default = "default_domain")]
    pub domain: (f64, f64),
    #[serde(default)]
    pub potential: Potential,
    /// Cubic coefficient.
    #[serde(default = "default_k")]
    pub k: f64,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
}

fn default_domain() -> (f64, f64) {
    (-5.0, 5.0)
}

fn default_k() -> f64 {
    1.0
}

fn default_lambda() -> f64 {
    2.0
}

impl Gp1dSpec {
    /// Spec with the benchmark defaults: domain `[-5, 5]`, `V(t) = t^2`,
    /// `k = 1`, `lambda = 2`.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            domain: default_domain(),
            potential: Potential::default(),
            k: default_k(),
            lambda: default_lambda(),
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidParameter(
                "need at least one interior grid point".into(),
            ));
        }
        if self.k <= 0.0 || self.k.is_nan() {
            return Err(Error::InvalidParameter(format!(
                "cubic coefficient k must be positive, got {}",
                self.k
            )));
        }
        let (a, b) = self.domain;
        if a >= b || a.is_nan() || b.is_nan() {
            return Err(Error::InvalidParameter(format!(
                "domain must satisfy a < b, got ({a}, {b})"
            )));
        }
        Ok(())
    }
}

/// Discretizes the 1-D Gross-Pitaevskii equation on `n` interior points.
///
/// With `h = (b - a)/(n + 1)` and `t_i = a + i h` for `i = 1..n`, the matrix
/// is `(1/h^2) tridiag(-1, 2, -1) + diag(V(t_i))`: an irreducible Stieltjes
/// matrix (negative off-diagonals on a chain graph, positive definite by
/// diagonal dominance since `V >= 0`).
pub fn discretize_gp1d(spec: &Gp1dSpec) -> Result<ProblemInstance> {
    spec.validate()?;
    let (a, b) = spec.domain;
    let n = spec.n;
    let h = (b - a) / (n + 1) as f64;
    let inv_h2 = 1.0 / (h * h);
    let diag: Vec<f64> = (1..=n)
        .map(|i| {
            let t = a + i as f64 * h;
            2.0 * inv_h2 + spec.potential.eval(t)
        })
        .collect();
    let sub = vec![-inv_h2; n - 1];
    let matrix = SymmetricSparseMatrix::tridiagonal(diag, sub)?;
    ProblemInstance::new(matrix, Nonlinearity::cubic(spec.k)?, spec.lambda)
}

/// Seeded random irreducible Stieltjes instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n: usize,
    /// Probability of each strict-upper off-diagonal being present.
    pub density: f64,
    /// Added to the absolute row sum on the diagonal; strict diagonal
    /// dominance makes the matrix positive definite by construction.
    pub diagonal_boost: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            density: 0.25,
            diagonal_boost: 1.0,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        let density_ok = self.density > 0.0 && self.density <= 1.0;
        if self.n > 1 && !density_ok {
            return Err(Error::InvalidParameter(format!(
                "density must lie in (0, 1] for n > 1, got {}",
                self.density
            )));
        }
        if self.diagonal_boost <= 0.0 || self.diagonal_boost.is_nan() {
            return Err(Error::InvalidParameter(format!(
                "diagonal_boost must be positive, got {}",
                self.diagonal_boost
            )));
        }
        Ok(())
    }
}

/// Generates a random irreducible Stieltjes instance with a lambda drawn
/// above the smallest eigenvalue.
///
/// The sparsity pattern is redrawn until its graph is connected;
/// off-diagonals are drawn from `[-1, -0.1]`, the diagonal is the absolute
/// row sum plus `diagonal_boost`, and `lambda = mu + uniform(0.5, 2.0)`.
/// The nonlinearity is the unit cubic. Deterministic for a given seed.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<ProblemInstance> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let matrix = loop {
        let mut offdiag = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random::<f64>() < spec.density {
                    offdiag.push((i, j, -(0.1 + 0.9 * rng.random::<f64>())));
                }
            }
        }
        let mut rowsum = vec![0.0; n];
        for &(i, j, v) in &offdiag {
            rowsum[i] += v.abs();
            rowsum[j] += v.abs();
        }
        let diag: Vec<f64> = rowsum.iter().map(|s| s + spec.diagonal_boost).collect();
        let m = SymmetricSparseMatrix::new(n, diag, offdiag)?;
        if m.is_irreducible() {
            break m;
        }
    };
    let eig = smallest_eigenpair(&matrix, DEFAULT_EIG_TOL, DEFAULT_EIG_MAX_ITER)?;
    let lambda = eig.mu + 0.5 + 1.5 * rng.random::<f64>();
    ProblemInstance::new(matrix, Nonlinearity::cubic(1.0)?, lambda)
}

/// Loads an instance from a Matrix Market file, validating the matrix
/// classification and `lambda > mu`.
pub fn load_instance(
    path: impl AsRef<Path>,
    nl: Nonlinearity,
    lambda: f64,
) -> Result<ProblemInstance> {
    let matrix = read_matrix_market(path)?;
    let instance = ProblemInstance::new(matrix, nl, lambda)?;
    let eig = smallest_eigenpair(instance.matrix(), DEFAULT_EIG_TOL, DEFAULT_EIG_MAX_ITER)?;
    check_lambda(lambda, eig.mu)?;
    Ok(instance)
}
