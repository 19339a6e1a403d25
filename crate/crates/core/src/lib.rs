//! Solvers for the nonlinear eigen-problem `A x + F(x) = lambda x`, where
//! `A` is an irreducible Stieltjes matrix and `F` acts componentwise.
//!
//! For `lambda` above the smallest eigenvalue `mu` of `A`, the problem has a
//! unique positive solution. This crate implements the Newton iteration and
//! its frozen-derivative (modified Newton) variant, both started from
//! `beta p`, a scaled copy of the positive eigenvector of `A` for `mu`,
//! with `beta` large enough that the iteration decreases monotonically
//! componentwise to the solution. The solver verifies the monotone behavior
//! at run time and records a complete per-step trace.
//!
//! # Layout
//!
//! * [`linalg`]: sparse symmetric storage, Stieltjes classification with
//!   certificates, LDL^T factorization (tridiagonal fast path), smallest
//!   eigenpair, Matrix Market I/O.
//! * [`nonlinearity`]: the constructible nonlinearity families `cubic(k)`
//!   and `power(k, p)` with derivatives and hypothesis checks.
//! * [`solver`]: the residual/Jacobian machinery, the Newton and modified
//!   Newton engine, beta selection, tracing, lambda sweeps.
//! * [`problems`]: 1-D Gross-Pitaevskii discretization, seeded synthetic
//!   instances, file-based instances.
//!
//! # Example
//!
//! ```
//! use stieltjes_newton::problems::{discretize_gp1d, Gp1dSpec};
//! use stieltjes_newton::solver::{solve, SolverConfig};
//!
//! // -x'' + t^2 x + x^3 = 2x on [-5, 5], 500 interior points.
//! let problem = discretize_gp1d(&Gp1dSpec::new(500)).unwrap();
//! // Modified Newton: refresh the derivative every 3 steps, start at 10 p.
//! let cfg = SolverConfig::modified(3).with_fixed_beta(10.0);
//! let result = solve(&problem, &cfg).unwrap();
//! assert!(result.converged);
//! assert_eq!(result.trace.factorizations, 6);
//! ```

pub mod error;
pub mod linalg;
pub mod nonlinearity;
pub mod problems;
pub mod solver;

pub use error::{Error, Result};
pub use linalg::{
    classify, factorize, smallest_eigenpair, EigenPair, Factorization, Layout,
    MatrixClassification, SymmetricSparseMatrix,
};
pub use nonlinearity::{validate_hypotheses, HypothesisReport, Nonlinearity, Param};
pub use problems::{discretize_gp1d, generate_synthetic, load_instance, Gp1dSpec, SyntheticSpec};
pub use solver::{
    choose_beta, inner_step, lambda_sweep, solve, BetaMode, InnerSchedule, IterationTrace,
    ProblemInstance, SolveResult, SolverConfig, TraceVerbosity,
};

#[cfg(test)]
mod tests {
    // Everything is immutable after construction and the operations are
    // pure, so instances, factorizations, and results move freely across
    // threads.
    #[test]
    fn core_types_are_send_and_sync() {
        fn check<T: Send + Sync>() {}
        check::<crate::SymmetricSparseMatrix>();
        check::<crate::Factorization>();
        check::<crate::EigenPair>();
        check::<crate::Nonlinearity>();
        check::<crate::ProblemInstance>();
        check::<crate::SolverConfig>();
        check::<crate::SolveResult>();
        check::<crate::Error>();
    }
}
