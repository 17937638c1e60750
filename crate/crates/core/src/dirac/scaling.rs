use serde::Serialize;

use super::{dirac_assemble, DiracError, LatticeSpec, Potential};
use crate::exec::{map_slice, Strategy};
use crate::numop::transform::bounded_transform;
use crate::numop::{index_difference, schatten_norm, DenseOp};
use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingRow {
    pub lambda: f64,
    pub dimension: usize,
    /// `Tr((1 − T*T)^n − (1 − TT*)^n)` for `T` the bounded transform of
    /// `λ^{−1/2} D⁺`.
    pub hind: f64,
    /// Schatten-n norm of `(1 − T*T)^n − (1 − TT*)^n`.
    pub difference_norm: f64,
    /// `|hind| < 1e−9 · dimension`
    pub pass: bool,
}

/// Per-`λ` diagnostics for `λ^{−1/2} D⁺`; degree `n` is the lattice
/// half-dimension.
pub fn scaling_family(
    spec: &LatticeSpec,
    pot: &Potential,
    lambdas: &[f64],
    strategy: Strategy,
) -> Result<Vec<ScalingRow>, DiracError> {
    if let Some(l) = lambdas.iter().find(|l| !(**l > 0.0)) {
        return Err(DiracError::Lattice(format!("lambda {l} must be positive")));
    }
    let pair = dirac_assemble(spec, pot)?;
    let n = spec.n;
    let rows = map_slice(strategy, lambdas, |&lambda| scaling_row(&pair.plus, lambda, n));
    rows.into_iter().collect()
}

fn scaling_row(d: &DenseOp, lambda: f64, n: u32) -> Result<ScalingRow, DiracError> {
    let scaled = d * Complex64::new(lambda.powf(-0.5), 0.0);
    let t = bounded_transform(&scaled)?.t;
    let diff = index_difference(&t, n);
    let hind = diff.trace().re;
    let difference_norm = schatten_norm(&diff, n as f64)?.value;
    let dimension = d.nrows();
    Ok(ScalingRow { lambda, dimension, hind, difference_norm, pass: hind.abs() < 1e-9 * dimension as f64 })
}
