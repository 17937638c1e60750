use serde::{Deserialize, Serialize};

use super::HomotopyError;
use crate::exec::{map_slice, Strategy};
use crate::numop::shift::{hind_shift, ShiftOp, WeightRule};

/// A one-parameter family of weighted shifts `t ↦ T_t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ShiftFamily {
    /// `1 − w_k(t)² = (1+t) / ((2+t)(k+2))`
    SmoothInverse,
    /// The same weights for every `t`.
    Frozen { weights: WeightRule },
    /// `before` for `t < at`, `after` from `at` on.
    Switch { at: f64, before: WeightRule, after: WeightRule },
}

impl ShiftFamily {
    pub fn rule_at(&self, t: f64) -> WeightRule {
        match *self {
            ShiftFamily::SmoothInverse => WeightRule::InversePoly { scale: (1.0 + t) / (2.0 + t), alpha: 1.0 },
            ShiftFamily::Frozen { weights } => weights,
            ShiftFamily::Switch { at, before, after } => {
                if t < at {
                    before
                } else {
                    after
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SliceIndex {
    pub t: f64,
    pub value: f64,
    pub bound: f64,
    pub terms: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexAlongPath {
    pub slices: Vec<SliceIndex>,
    /// `max − min` of the slice values.
    pub spread: f64,
    /// `spread < 2·tol`
    pub constant: bool,
}

/// Certified index of every slice, computed independently per `t`. The
/// first inadmissible slice (in grid order) is reported as an error.
pub fn index_along_path(
    family: &ShiftFamily,
    n: u32,
    grid: &[f64],
    tol: f64,
    strategy: Strategy,
) -> Result<IndexAlongPath, HomotopyError> {
    let results = map_slice(strategy, grid, |&t| {
        ShiftOp::new(family.rule_at(t))
            .and_then(|op| hind_shift(&op, n, tol))
            .map(|ix| SliceIndex { t, value: ix.value, bound: ix.bound, terms: ix.terms })
            .map_err(|source| HomotopyError::Slice { t, source })
    });
    let slices = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let max = slices.iter().map(|s| s.value).fold(f64::NEG_INFINITY, f64::max);
    let min = slices.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
    let spread = if slices.is_empty() { 0.0 } else { max - min };
    Ok(IndexAlongPath { slices, spread, constant: spread < 2.0 * tol })
}
