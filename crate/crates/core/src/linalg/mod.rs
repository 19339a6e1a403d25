//! Sparse symmetric matrices, Stieltjes/M-matrix classification, symmetric
//! factorization, and smallest-eigenpair computation.
//!
//! A Stieltjes matrix is a symmetric positive definite Z-matrix (all
//! off-diagonal entries nonpositive). Every Stieltjes matrix is a nonsingular
//! M-matrix; it is irreducible exactly when its inverse is entrywise positive.

mod eigen;
mod factor;
mod market;

pub use eigen::{smallest_eigenpair, EigenPair, DEFAULT_EIG_MAX_ITER, DEFAULT_EIG_TOL};
pub use factor::{factorize, Factorization, DENSE_CAP, PIVOT_FLOOR};
pub use market::{
    read_matrix_market, read_matrix_market_from, write_matrix_market, write_matrix_market_to,
};

use serde::Serialize;

use crate::error::{Error, Result};

/// Storage layout hint. Tridiagonal matrices take a linear-time
/// factorization path; everything else falls back to a dense symmetric
/// factorization capped at [`DENSE_CAP`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Tridiagonal,
    General,
}

/// Symmetric real matrix stored as a diagonal plus the strict upper triangle.
///
/// Only entries with `row < col` are stored, each pair at most once, so the
/// reconstructed matrix is symmetric by construction. Zero-valued
/// off-diagonals are dropped at construction; a stored entry is always a
/// graph edge.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSparseMatrix {
    n: usize,
    diag: Vec<f64>,
    offdiag: Vec<(usize, usize, f64)>,
    layout: Layout,
}

impl SymmetricSparseMatrix {
    /// Builds a matrix from its diagonal and strict-upper-triangle entries.
    ///
    /// Entries may be given as `(row, col, value)` with either ordering of
    /// the index pair; they are normalized to `row < col`, sorted, and
    /// checked for duplicates. The layout hint is detected automatically.
    pub fn new(n: usize, diag: Vec<f64>, offdiag: Vec<(usize, usize, f64)>) -> Result<Self> {
        if diag.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: diag.len(),
            });
        }
        let mut entries = Vec::with_capacity(offdiag.len());
        for (r, c, v) in offdiag {
            if r == c {
                return Err(Error::InvalidMatrix(format!(
                    "off-diagonal entry on the diagonal at ({r}, {c})"
                )));
            }
            if r >= n || c >= n {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({r}, {c}) out of range for dimension {n}"
                )));
            }
            if v != 0.0 {
                entries.push(if r < c { (r, c, v) } else { (c, r, v) });
            }
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(Error::InvalidMatrix(format!(
                    "duplicate off-diagonal entry at ({}, {})",
                    w[0].0, w[0].1
                )));
            }
        }
        let layout = if entries.iter().all(|&(r, c, _)| c == r + 1) {
            Layout::Tridiagonal
        } else {
            Layout::General
        };
        Ok(Self {
            n,
            diag,
            offdiag: entries,
            layout,
        })
    }

    /// Builds a tridiagonal matrix from its diagonal and subdiagonal.
    pub fn tridiagonal(diag: Vec<f64>, sub: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n > 0 && sub.len() != n - 1 {
            return Err(Error::DimensionMismatch {
                expected: n.saturating_sub(1),
                got: sub.len(),
            });
        }
        let offdiag = sub
            .into_iter()
            .enumerate()
            .map(|(i, v)| (i, i + 1, v))
            .collect();
        Self::new(n, diag, offdiag)
    }

    /// n-by-n identity.
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            diag: vec![1.0; n],
            offdiag: Vec::new(),
            layout: Layout::Tridiagonal,
        }
    }

    /// 1-by-1 matrix `[a]`.
    pub fn scalar(a: f64) -> Self {
        Self {
            n: 1,
            diag: vec![a],
            offdiag: Vec::new(),
            layout: Layout::Tridiagonal,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Stored strict-upper-triangle entries, sorted by `(row, col)`.
    pub fn off_diagonals(&self) -> &[(usize, usize, f64)] {
        &self.offdiag
    }

    /// Returns a matrix with the same off-diagonal pattern and a new diagonal.
    pub fn with_diagonal(&self, diag: Vec<f64>) -> Result<Self> {
        if diag.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: diag.len(),
            });
        }
        Ok(Self {
            n: self.n,
            diag,
            offdiag: self.offdiag.clone(),
            layout: self.layout,
        })
    }

    /// Matrix-vector product `A x`.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, xi)| d * xi).collect();
        for &(r, c, v) in &self.offdiag {
            y[r] += v * x[c];
            y[c] += v * x[r];
        }
        Ok(y)
    }

    /// Infinity norm (maximum row sum of absolute values).
    pub fn norm_inf(&self) -> f64 {
        let mut rows: Vec<f64> = self.diag.iter().map(|d| d.abs()).collect();
        for &(r, c, v) in &self.offdiag {
            rows[r] += v.abs();
            rows[c] += v.abs();
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    /// True when every off-diagonal entry is nonpositive.
    pub fn is_z_matrix(&self) -> bool {
        self.offdiag.iter().all(|&(_, _, v)| v <= 0.0)
    }

    /// True when the undirected graph of nonzero off-diagonals is connected.
    /// A 1-by-1 matrix counts as irreducible.
    pub fn is_irreducible(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        if self.n == 1 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n];
        for &(r, c, _) in &self.offdiag {
            adj[r].push(c);
            adj[c].push(r);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }
}

/// Outcome of [`classify`]: the Z/M/Stieltjes predicates plus, for Stieltjes
/// matrices, a nonsingular-M-matrix witness vector `v > 0` with `Av > 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixClassification {
    pub is_z_matrix: bool,
    /// Always true for this storage; kept for report completeness.
    pub is_symmetric: bool,
    pub is_positive_definite: bool,
    pub is_irreducible: bool,
    pub is_stieltjes: bool,
    /// `v = A^{-1} e`; then `v > 0` and `Av = e > 0` componentwise.
    pub certificate_vector: Option<Vec<f64>>,
}

/// Classifies a symmetric matrix.
///
/// Positive definiteness is decided by attempting a symmetric triangular
/// factorization (success with all pivots above the breakdown floor);
/// irreducibility by reachability on the graph of nonzero off-diagonals.
pub fn classify(a: &SymmetricSparseMatrix) -> Result<MatrixClassification> {
    if a.dim() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let is_z_matrix = a.is_z_matrix();
    let is_irreducible = a.is_irreducible();
    let fact = match factorize(a) {
        Ok(f) => Some(f),
        Err(Error::NotPositiveDefinite { .. }) => None,
        Err(e) => return Err(e),
    };
    let is_positive_definite = fact.is_some();
    let is_stieltjes = is_z_matrix && is_positive_definite;
    let certificate_vector = match (&fact, is_stieltjes) {
        (Some(f), true) => Some(f.solve(&vec![1.0; a.dim()])?),
        _ => None,
    };
    Ok(MatrixClassification {
        is_z_matrix,
        is_symmetric: true,
        is_positive_definite,
        is_irreducible,
        is_stieltjes,
        certificate_vector,
    })
}
