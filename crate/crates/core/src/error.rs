//! Error types shared across the crate.

use thiserror::Error;

use crate::linalg::EigenPair;
use crate::solver::{IterationTrace, SolveResult};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix dimension must be positive")]
    EmptyMatrix,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A symmetric factorization hit a pivot at or below the breakdown floor.
    #[error("matrix is not positive definite: pivot {pivot:e} at index {index}")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("matrix is not a Stieltjes matrix: {reason}")]
    NotStieltjes { reason: String },

    #[error("matrix is reducible: the graph of nonzero off-diagonals is disconnected")]
    Reducible,

    /// Inverse power iteration ran out of iterations. Carries the best pair seen.
    #[error("eigen iteration did not converge in {max_iter} steps (best residual {residual:e})")]
    EigenNoConvergence {
        max_iter: usize,
        residual: f64,
        best: Box<EigenPair>,
    },

    #[error("lambda = {lambda} does not exceed the smallest eigenvalue mu = {mu}; no positive solution exists")]
    LambdaBelowMu { lambda: f64, mu: f64 },

    #[error("lambda equals the smallest eigenvalue mu = {mu} exactly; the problem has no positive solution there")]
    LambdaEqualsMu { mu: f64 },

    /// Auto-beta doubling reached the cap without satisfying the starting condition.
    #[error("no valid beta below cap {cap:e}: best ratio {min_ratio:e}, needed > {needed:e}")]
    NoValidBeta {
        cap: f64,
        min_ratio: f64,
        needed: f64,
    },

    /// Iteration caps exhausted. Carries the partial result and its trace.
    #[error("solver did not converge: {reason}")]
    NoConvergence {
        reason: String,
        partial: Box<SolveResult>,
    },

    /// A monotone-convergence guarantee failed while it was being enforced.
    #[error("monotonicity violated at outer step {outer}, inner step {inner}: {detail}")]
    MonotonicityViolation {
        outer: usize,
        inner: usize,
        detail: String,
        trace: Box<IterationTrace>,
    },

    #[error("normalized residual undefined: zero denominator")]
    UndefinedMetric,

    /// One solve of a lambda sweep failed; results up to that point are kept.
    #[error("lambda sweep failed at index {index}: {source}")]
    SweepFailed {
        index: usize,
        partial: Vec<SolveResult>,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("matrix market parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}
