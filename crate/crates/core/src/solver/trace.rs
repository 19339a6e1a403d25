//! Iteration tracing and solve results.

use serde::{Deserialize, Serialize};

/// How much per-step detail the trace keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceVerbosity {
    /// Per-step residual norms and flags only.
    #[default]
    Summary,
    /// Additionally keeps every frozen point and every inner iterate.
    Full,
}

/// One inner step `x_{k,s-1} -> x_{k,s}` taken under a frozen derivative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerStepRecord {
    /// `||G(x)||_inf` after the step.
    pub residual_norm: f64,
    /// `min_i G(x)_i` after the step.
    pub residual_min: f64,
    /// Componentwise strict decrease held (within slack) and, before
    /// convergence, the residual stayed entrywise above `-mono_tol`.
    pub monotone_ok: bool,
    /// The iterate itself; kept only at full verbosity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterate: Option<Vec<f64>>,
}

/// One outer step: a derivative evaluation/factorization plus its block of
/// inner steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuterStepRecord {
    /// The frozen point `x_{k,0}`; kept only at full verbosity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frozen_point: Option<Vec<f64>>,
    /// Seconds from solve start to this factorization.
    pub factorization_time_s: f64,
    /// The frozen derivative classified as an irreducible Stieltjes matrix.
    pub jacobian_stieltjes: bool,
    pub steps: Vec<InnerStepRecord>,
}

/// Full record of a solve.
///
/// `factorizations` equals the number of Frechet-derivative evaluations,
/// the outer-iteration count used as the cost unit in benchmark tables.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct IterationTrace {
    pub outer: Vec<OuterStepRecord>,
    pub factorizations: usize,
    pub total_inner_steps: usize,
    pub wall_time_s: f64,
}

/// Outcome of a solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    /// Final iterate.
    pub x: Vec<f64>,
    /// True iff `||G(x)||_inf < eps`.
    pub converged: bool,
    /// Normalized residual at the final iterate.
    pub nres: f64,
    /// The starting scale actually used (`x_0 = beta * p`); zero for
    /// warm-started solves, which do not use the eigenvector start.
    pub beta_used: f64,
    /// Whether the starting condition `min_i f_i(beta p_i)/(beta p_i) >
    /// lambda - mu` held for the beta used.
    pub condition9_satisfied: bool,
    pub trace: IterationTrace,
}
