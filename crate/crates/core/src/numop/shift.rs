//! Weighted unilateral shifts `T e_k = w_k e_{k+1}` on `ℓ²(ℕ)`.
//!
//! Both `1 − T*T` and `1 − TT*` are diagonal: entry `k` is `δ_k = 1 − w_k²`
//! and `δ_{k−1}` respectively, with `δ_{−1} = 1`. The index series is never
//! truncated as an operator; its diagonal `a_k − a_{k−1}` (`a_k = δ_k^n`) is
//! summed directly with a certified tail.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{NumopError, Residual, SchattenReport};
use crate::freealg::FreePoly;

/// Closed-form weight rules. Each one computes `δ_k = 1 − w_k²` directly so
/// small defects keep full relative precision.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WeightRule {
    /// `δ_k = scale / (k+2)^alpha`
    InversePoly { scale: f64, alpha: f64 },
    /// `w_k = c`
    Constant { c: f64 },
    /// `δ_k = q^{k+1}`
    Geometric { q: f64 },
    /// `w_k = 1` on even `k`, `low` on odd `k`
    Alternating { low: f64 },
}

impl WeightRule {
    pub fn validate(&self) -> Result<(), NumopError> {
        let ok = match *self {
            WeightRule::InversePoly { scale, alpha } => {
                scale >= 0.0 && alpha.is_finite() && scale <= 2f64.powf(alpha)
            }
            WeightRule::Constant { c } => c.abs() <= 1.0,
            WeightRule::Geometric { q } => (0.0..=1.0).contains(&q),
            WeightRule::Alternating { low } => low.abs() <= 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(NumopError::InvalidParameter(format!("weight rule {self:?} has some |w_k| > 1")))
        }
    }

    /// `δ_k = 1 − w_k²`
    pub fn defect(&self, k: usize) -> f64 {
        match *self {
            WeightRule::InversePoly { scale, alpha } => scale / (k as f64 + 2.0).powf(alpha),
            WeightRule::Constant { c } => 1.0 - c * c,
            WeightRule::Geometric { q } => q.powi(k as i32 + 1),
            WeightRule::Alternating { low } => {
                if k.is_multiple_of(2) {
                    0.0
                } else {
                    1.0 - low * low
                }
            }
        }
    }

    pub fn weight(&self, k: usize) -> f64 {
        match *self {
            WeightRule::Constant { c } => c,
            WeightRule::Alternating { low } if k % 2 == 1 => low,
            _ => (1.0 - self.defect(k)).max(0.0).sqrt(),
        }
    }

    /// `δ_{k−1}` with the convention `δ_{−1} = 1`.
    fn defect_before(&self, k: usize) -> f64 {
        if k == 0 {
            1.0
        } else {
            self.defect(k - 1)
        }
    }

    /// Bound on `Σ_{k>K} |δ_k^n − δ_{k−1}^n|`, the trace norm of the
    /// diagonal beyond `K`. Infinite when the series does not converge.
    pub fn tail_bound(&self, n: u32, cutoff: usize) -> f64 {
        match *self {
            // Monotone decreasing to 0: the tail telescopes to δ_K^n.
            WeightRule::InversePoly { alpha, .. } if alpha > 0.0 => self.defect(cutoff).powi(n as i32),
            WeightRule::InversePoly { scale: 0.0, .. } => 0.0,
            WeightRule::InversePoly { .. } => f64::INFINITY,
            WeightRule::Constant { .. } => 0.0,
            WeightRule::Geometric { q } if q < 1.0 => self.defect(cutoff).powi(n as i32),
            WeightRule::Geometric { .. } => 0.0,
            WeightRule::Alternating { low } if low.abs() == 1.0 => 0.0,
            WeightRule::Alternating { .. } => f64::INFINITY,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            WeightRule::InversePoly { .. } => "shift:inverse-poly",
            WeightRule::Constant { .. } => "shift:constant",
            WeightRule::Geometric { .. } => "shift:geometric",
            WeightRule::Alternating { .. } => "shift:alternating",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftOp {
    pub rule: WeightRule,
}

impl ShiftOp {
    pub fn new(rule: WeightRule) -> Result<Self, NumopError> {
        rule.validate()?;
        Ok(ShiftOp { rule })
    }

    pub fn tail_bound(&self, n: u32, cutoff: usize) -> f64 {
        self.rule.tail_bound(n, cutoff)
    }

    /// Diagonal entry `k` of `(1 − T*T)^n − (1 − TT*)^n`.
    pub fn index_diagonal(&self, n: u32, k: usize) -> f64 {
        self.rule.defect(k).powi(n as i32) - self.rule.defect_before(k).powi(n as i32)
    }

    /// Diagonal entry `k` of `T*T − TT*`, i.e. `δ_{k−1} − δ_k`.
    pub fn commutator_diagonal(&self, k: usize) -> f64 {
        self.rule.defect_before(k) - self.rule.defect(k)
    }

    /// Smallest cutoff with `tail_bound(n, K) < tol`, searched up to `cap`.
    pub fn cutoff_for(&self, n: u32, tol: f64, cap: usize) -> Result<usize, NumopError> {
        if n == 0 {
            return Err(NumopError::InvalidParameter("index degree n must be >= 1".into()));
        }
        if !(tol > 0.0) {
            return Err(NumopError::InvalidParameter(format!("tolerance {tol} must be positive")));
        }
        if !self.tail_bound(n, cap).is_finite() {
            return Err(NumopError::NotSummable { n, reason: format!("{} has no vanishing tail", self.rule.name()) });
        }
        if self.tail_bound(n, cap) >= tol {
            return Err(NumopError::NotSummable {
                n,
                reason: format!("tail bound {:.3e} at cutoff {cap} still exceeds {tol:.3e}", self.tail_bound(n, cap)),
            });
        }
        let (mut lo, mut hi) = (0usize, cap);
        if self.tail_bound(n, 0) < tol {
            return Ok(0);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.tail_bound(n, mid) < tol {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}

/// Largest cutoff the summation will consider.
pub const DEFAULT_CUTOFF_CAP: usize = 200_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftIndex {
    pub value: f64,
    /// Certified bound on `|value − H-Ind_n(T)|`.
    pub bound: f64,
    /// Number of diagonal entries summed.
    pub terms: usize,
}

/// `Tr((1 − T*T)^n − (1 − TT*)^n)` by summing the diagonal up to the first
/// cutoff whose tail bound is below `tol`.
pub fn hind_shift(t: &ShiftOp, n: u32, tol: f64) -> Result<ShiftIndex, NumopError> {
    let cutoff = t.cutoff_for(n, tol, DEFAULT_CUTOFF_CAP)?;
    let (sum, rounding) = kahan_sum((0..=cutoff).map(|k| t.index_diagonal(n, k)));
    // Each entry carries a relative error of about (n + 2) ulps from the
    // powers and the subtraction.
    let entry_error = (n as f64 + 2.0) * rounding;
    Ok(ShiftIndex { value: sum, bound: t.tail_bound(n, cutoff) + rounding + entry_error, terms: cutoff + 1 })
}

/// Compensated sum with a rounding bound for the result.
fn kahan_sum(xs: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut sum, mut comp, mut abs) = (0.0f64, 0.0f64, 0.0f64);
    for x in xs {
        let y = x - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        abs += x.abs();
    }
    (sum, 4.0 * f64::EPSILON * abs + f64::EPSILON * sum.abs())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutatorReport {
    pub cutoff: usize,
    pub report: SchattenReport,
    /// Bound on the Schatten-n norm of the part of `T*T − TT*` beyond the
    /// cutoff.
    pub tail_bound: f64,
}

/// Schatten-n norm of the `K×K` compression of `T*T − TT*` (a diagonal),
/// with a bound on what lies beyond.
pub fn commutator_schatten_check(t: &ShiftOp, n: u32, cutoff: usize) -> Result<CommutatorReport, NumopError> {
    if n == 0 || cutoff == 0 {
        return Err(NumopError::InvalidParameter("need n >= 1 and cutoff >= 1".into()));
    }
    let diag: Vec<f64> = (0..cutoff).map(|k| t.commutator_diagonal(k)).collect();
    let report = SchattenReport::from_singular_values(diag, n as f64)?;
    // ‖tail‖_n ≤ ‖tail‖_1 = Σ_{k≥K} |δ_{k−1} − δ_k|.
    Ok(CommutatorReport { cutoff, report, tail_bound: t.tail_bound(1, cutoff - 1) })
}

/// Trace of `π(w^n − v^n)` computed entry by entry from words acting on the
/// shift basis, against [`hind_shift`]. Passes when the two agree within
/// `2·tol`.
pub fn pairing_check_shift(t: &ShiftOp, n: u32, tol: f64) -> Result<(Residual, ShiftIndex), NumopError> {
    let index = hind_shift(t, n, tol)?;
    let g0 = &FreePoly::w().pow(n) - &FreePoly::v().pow(n);
    let weight = |k: usize| t.rule.weight(k);
    let (pairing, _) = kahan_sum((0..index.terms).map(|k| {
        let z: Complex64 = g0.shift_diagonal(k, &weight);
        z.re
    }));
    let r = Residual::below("pairing_shift", (pairing - index.value).abs(), 2.0 * tol).with_bound(index.bound);
    Ok((r, index))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harmonic() -> ShiftOp {
        ShiftOp::new(WeightRule::InversePoly { scale: 1.0, alpha: 1.0 }).unwrap()
    }

    #[test]
    fn harmonic_index_is_minus_one() {
        let r = hind_shift(&harmonic(), 2, 1e-8).unwrap();
        assert!((r.value + 1.0).abs() <= r.bound, "{r:?}");
        assert!(r.bound <= 1e-8 + 1e-12);
    }

    #[test]
    fn harmonic_matches_direct_sum_to_a_million() {
        // Independent route: plain summation of 1/(k+2)^2 − 1/(k+1)^2.
        let direct: f64 = (0..=1_000_000u64)
            .map(|k| 1.0 / ((k + 2) as f64).powi(2) - 1.0 / ((k + 1) as f64).powi(2))
            .sum();
        let r = hind_shift(&harmonic(), 2, 1e-8).unwrap();
        assert!((direct - r.value).abs() < 1e-8 + 1e-11);
    }

    #[test]
    fn isometry_and_zero() {
        let iso = ShiftOp::new(WeightRule::Constant { c: 1.0 }).unwrap();
        let r = hind_shift(&iso, 1, 1e-10).unwrap();
        assert_eq!(r.value, -1.0);
        assert_eq!(iso.index_diagonal(1, 0), -1.0);
        assert_eq!(iso.index_diagonal(1, 5), 0.0);
        let zero = ShiftOp::new(WeightRule::Constant { c: 0.0 }).unwrap();
        assert_eq!(hind_shift(&zero, 3, 1e-10).unwrap().value, 0.0);
    }

    #[test]
    fn alternating_rule_is_not_summable() {
        let alt = ShiftOp::new(WeightRule::Alternating { low: 0.5 }).unwrap();
        assert!(matches!(hind_shift(&alt, 2, 1e-8), Err(NumopError::NotSummable { .. })));
        assert!(ShiftOp::new(WeightRule::Constant { c: 1.5 }).is_err());
    }

    #[test]
    fn commutator_diagonal_formula() {
        let t = harmonic();
        for k in 0..50 {
            let expect = 1.0 / (k as f64 + 1.0) - 1.0 / (k as f64 + 2.0);
            assert!((t.commutator_diagonal(k) - expect).abs() < 1e-15);
        }
        let c = ShiftOp::new(WeightRule::Constant { c: 0.6 }).unwrap();
        let rep = commutator_schatten_check(&c, 2, 20).unwrap();
        assert!((rep.report.value - 0.36).abs() < 1e-15);
        assert_eq!(rep.report.singular_values.iter().filter(|s| **s != 0.0).count(), 1);
    }

    #[test]
    fn commutator_norm_stabilizes() {
        let t = harmonic();
        let a = commutator_schatten_check(&t, 2, 1_000).unwrap();
        let b = commutator_schatten_check(&t, 2, 10_000).unwrap();
        assert!((b.report.value - a.report.value).abs() < a.tail_bound);
    }

    #[test]
    fn pairing_matches_index() {
        let (r, idx) = pairing_check_shift(&harmonic(), 2, 1e-8).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((idx.value + 1.0).abs() < 2e-8);
        let zero = ShiftOp::new(WeightRule::Constant { c: 0.0 }).unwrap();
        assert_eq!(pairing_check_shift(&zero, 2, 1e-8).unwrap().0.value, 0.0);
    }
}
