//! Shared instance builders for the benchmark targets.

use stieltjes_newton::problems::{discretize_gp1d, Gp1dSpec};
use stieltjes_newton::solver::{ProblemInstance, SolverConfig};

/// The benchmark instance: Gross-Pitaevskii at lambda = 2, k = 1 on [-5, 5].
pub fn gp_instance(n: usize) -> ProblemInstance {
    discretize_gp1d(&Gp1dSpec::new(n)).expect("valid spec")
}

/// Newton config with the benchmark start (beta = 10, eps = 1e-10).
pub fn newton_config() -> SolverConfig {
    SolverConfig::newton().with_fixed_beta(10.0)
}

/// Modified Newton config with blocks of three inner steps.
pub fn modified_config() -> SolverConfig {
    SolverConfig::modified(3).with_fixed_beta(10.0)
}
