//! Smallest eigenpair of an irreducible Stieltjes matrix by inverse power
//! iteration.

use super::{factorize, SymmetricSparseMatrix};
use crate::error::{Error, Result};

/// Default residual tolerance, relative to `max(1, ||A||_inf)`.
pub const DEFAULT_EIG_TOL: f64 = 1e-12;

/// Default iteration cap.
pub const DEFAULT_EIG_MAX_ITER: usize = 10_000;

/// Smallest eigenvalue `mu` of an irreducible Stieltjes matrix with its
/// strictly positive eigenvector `p`, scaled to unit infinity norm.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub mu: f64,
    pub p: Vec<f64>,
    /// `||A p - mu p||_inf` at return.
    pub residual_norm: f64,
}

/// Computes the smallest eigenpair of an irreducible Stieltjes matrix.
///
/// Inverse power iteration with shift zero: `A` is positive definite so the
/// single factorization is safe, and the smallest eigenvalue of an
/// irreducible Stieltjes matrix is simple, so the iteration converges. The
/// starting vector is `e`; iterates stay entrywise positive because the
/// inverse of an irreducible Stieltjes matrix is entrywise positive.
///
/// Convergence is declared at `||A p - mu p||_inf <= tol * max(1, ||A||_inf)`;
/// the scale factor keeps the criterion attainable in f64 for matrices with
/// large norm (the rounding floor of the residual itself grows with
/// `||A||_inf`).
pub fn smallest_eigenpair(
    a: &SymmetricSparseMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<EigenPair> {
    if a.dim() == 0 {
        return Err(Error::EmptyMatrix);
    }
    if tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "eigen tolerance must be positive, got {tol}"
        )));
    }
    if !a.is_z_matrix() {
        return Err(Error::NotStieltjes {
            reason: "a positive off-diagonal entry violates the Z-matrix property".into(),
        });
    }
    if !a.is_irreducible() {
        return Err(Error::Reducible);
    }
    let fact = match factorize(a) {
        Ok(f) => f,
        Err(Error::NotPositiveDefinite { index, pivot }) => {
            return Err(Error::NotStieltjes {
                reason: format!("not positive definite (pivot {pivot:e} at index {index})"),
            })
        }
        Err(e) => return Err(e),
    };

    let n = a.dim();
    let threshold = tol * a.norm_inf().max(1.0);
    let mut v = vec![1.0; n];
    let mut best: Option<EigenPair> = None;
    for _ in 0..max_iter {
        let mut w = fact.solve(&v)?;
        let scale = w.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        for x in &mut w {
            *x /= scale;
        }
        let aw = a.matvec(&w)?;
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..n {
            num += w[i] * aw[i];
            den += w[i] * w[i];
        }
        let mu = num / den;
        let residual_norm = aw
            .iter()
            .zip(&w)
            .fold(0.0f64, |m, (&awi, &wi)| m.max((awi - mu * wi).abs()));
        if best.as_ref().is_none_or(|b| residual_norm < b.residual_norm) {
            best = Some(EigenPair {
                mu,
                p: w.clone(),
                residual_norm,
            });
        }
        if residual_norm <= threshold {
            debug_assert!(w.iter().all(|&x| x > 0.0));
            return Ok(EigenPair {
                mu,
                p: w,
                residual_norm,
            });
        }
        v = w;
    }
    let best = best.expect("max_iter is at least 1");
    Err(Error::EigenNoConvergence {
        max_iter,
        residual: best.residual_norm,
        best: Box::new(best),
    })
}
