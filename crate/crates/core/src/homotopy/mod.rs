//! Operator paths, the transgression map `J`, and matrix-level checks of the
//! homotopy-invariance machinery.
//!
//! A path `t ↦ T_t` on `[0, 1]` induces homomorphisms `π_t` from the free
//! algebra by `x ↦ T_t`, `y ↦ T_t*`. Chains whose legs are such paths are
//! mapped by
//!
//! `J(x⁰⊗…⊗x^{n+1}) = ∫₀¹ x⁰_s (dx¹/dt)_s ⊗ x²_s ⊗ … ⊗ x^{n+1}_s ds`.
//!
//! Polynomial paths are integrated exactly; sampled paths use composite
//! Simpson with an error estimate from the half-resolution grid.

mod chain;
mod family;
mod hypotheses;
mod matpoly;
mod path;
mod sampled;
mod transgression;

pub use chain::{bj_plus_jb, jay, jb_formula_check, jb_formula_rhs, random_poly_chain, JbReport, PathChain};
pub use family::{index_along_path, IndexAlongPath, ShiftFamily, SliceIndex};
pub use hypotheses::{invariance_hypotheses_check, HypothesisReport, ModulusReport, FLAG_FACTOR};
pub use matpoly::MatPoly;
pub use path::{OperatorPath, SampledPath};
pub use sampled::{jay_sampled, SampledChain, SampledJay, SampledLeg};
pub use transgression::{
    minus_gamma2_chain,
    omega_forms_check, transgression_check, transgression_exact, transgression_tolerance, TransgressionReport,
};

use thiserror::Error;

use crate::numop::NumopError;

#[derive(Debug, Error)]
pub enum HomotopyError {
    #[error("sampled grid has {0} points; at least 5 are needed")]
    TooCoarse(usize),
    #[error("sampled grid: {0}")]
    Grid(String),
    #[error("J needs a chain of degree >= 1")]
    DegreeZero,
    #[error("n must be at least 1")]
    ZeroDegree,
    #[error("path legs disagree: {0}")]
    Mismatch(String),
    #[error("slice t = {t}: {source}")]
    Slice {
        t: f64,
        #[source]
        source: NumopError,
    },
    #[error(transparent)]
    Numop(#[from] NumopError),
}
