//! Lattice realizations of generalized Dirac operators on `ℝ^{2n}`.
//!
//! A finite lattice only produces matrices, and the homological index of a
//! matrix is always 0 (a trace identity). What can be checked here is the
//! structure (Clifford relations, adjointness, normality at zero
//! potential), the vanishing of every lattice index, and how Schatten norms
//! behave under lattice refinement.

mod clifford;
mod lattice;
mod scaling;
mod schatten;

pub use clifford::{clifford_build, CliffordRep, ExactEntry, MAX_CLIFFORD_N};
pub use lattice::{
    central_difference, dirac_assemble, dirac_assemble_with_budget, total_dimension, DiracPair, LatticeSpec,
    Potential, PotentialSpec,
};
pub use scaling::{scaling_family, ScalingRow};
pub use schatten::{
    schatten_decay_experiment, DecayFunction, Refinement, SchattenConfig, SchattenProbe, SchattenRow, SchattenTable,
};

use thiserror::Error;

use crate::numop::NumopError;

/// Default cap on the dense dimension of an assembled operator.
pub const DEFAULT_BUDGET: usize = 16384;

/// [`DEFAULT_BUDGET`] unless `HOMINDEX_BUDGET` holds a positive integer.
pub fn dimension_budget() -> usize {
    std::env::var("HOMINDEX_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|v| *v > 0)
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Debug, Error)]
pub enum DiracError {
    #[error("Clifford representation for n = {0} unsupported (1 <= n <= 4)")]
    CliffordSize(u32),
    #[error("lattice: {0}")]
    Lattice(String),
    #[error("potential: {0}")]
    Potential(String),
    #[error("a_{axis} is not Hermitian at {point:?} (defect {defect:.3e})")]
    NonHermitianPotential { axis: usize, point: Vec<f64>, defect: f64 },
    #[error("dimension {dim} exceeds the budget {budget}")]
    Budget { dim: usize, budget: usize },
    #[error("assembled D⁻ differs from (D⁺)* by {0:.3e}")]
    Adjoint(f64),
    #[error("schatten experiment: {0}")]
    Schatten(String),
    #[error(transparent)]
    Numop(#[from] NumopError),
}
