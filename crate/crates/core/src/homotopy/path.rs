use num_complex::Complex64;

use super::{HomotopyError, MatPoly};
use crate::numop::{op_norm, DenseOp};

/// Samples of a path on a uniform grid of `[0, 1]` with an even number of
/// intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledPath {
    ts: Vec<f64>,
    mats: Vec<DenseOp>,
}

impl SampledPath {
    pub fn new(ts: Vec<f64>, mats: Vec<DenseOp>) -> Result<Self, HomotopyError> {
        if ts.len() != mats.len() {
            return Err(HomotopyError::Grid(format!("{} times but {} matrices", ts.len(), mats.len())));
        }
        if ts.len() < 5 {
            return Err(HomotopyError::TooCoarse(ts.len()));
        }
        if !(ts.len() - 1).is_multiple_of(2) {
            return Err(HomotopyError::Grid(format!("{} intervals; Simpson needs an even count", ts.len() - 1)));
        }
        if ts.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(HomotopyError::Grid("times must be strictly increasing".into()));
        }
        if ts[0].abs() > 1e-12 || (ts[ts.len() - 1] - 1.0).abs() > 1e-12 {
            return Err(HomotopyError::Grid("times must run from 0 to 1".into()));
        }
        let h = 1.0 / (ts.len() - 1) as f64;
        if ts.iter().enumerate().any(|(i, t)| (t - i as f64 * h).abs() > 1e-9 * h) {
            return Err(HomotopyError::Grid("times must be uniformly spaced".into()));
        }
        let d = mats[0].nrows();
        if mats.iter().any(|m| m.shape() != (d, d)) {
            return Err(HomotopyError::Mismatch("sample matrices must share one square shape".into()));
        }
        Ok(SampledPath { ts, mats })
    }

    /// `f` sampled at `points` uniform times.
    pub fn from_fn(points: usize, f: impl Fn(f64) -> DenseOp) -> Result<Self, HomotopyError> {
        let ts: Vec<f64> = (0..points).map(|i| i as f64 / (points.max(2) - 1) as f64).collect();
        let mats = ts.iter().map(|t| f(*t)).collect();
        SampledPath::new(ts, mats)
    }

    pub fn times(&self) -> &[f64] {
        &self.ts
    }

    pub fn samples(&self) -> &[DenseOp] {
        &self.mats
    }

    pub fn dim(&self) -> usize {
        self.mats[0].nrows()
    }

    pub fn step(&self) -> f64 {
        1.0 / (self.ts.len() - 1) as f64
    }
}

/// Second-order differences on a uniform grid: central inside, one-sided
/// three-point at the ends.
pub(crate) fn grid_derivative(vals: &[DenseOp], h: f64) -> Vec<DenseOp> {
    let n = vals.len();
    let c = |x: f64| Complex64::new(x / (2.0 * h), 0.0);
    (0..n)
        .map(|i| {
            if i == 0 {
                &vals[0] * c(-3.0) + &vals[1] * c(4.0) - &vals[2] * c(1.0)
            } else if i == n - 1 {
                &vals[n - 1] * c(3.0) - &vals[n - 2] * c(4.0) + &vals[n - 3] * c(1.0)
            } else {
                (&vals[i + 1] - &vals[i - 1]) * c(1.0)
            }
        })
        .collect()
}

/// Linear interpolation of grid values at `t`.
pub(crate) fn interpolate(ts: &[f64], vals: &[DenseOp], t: f64) -> DenseOp {
    let h = ts[1] - ts[0];
    let pos = ((t - ts[0]) / h).clamp(0.0, (ts.len() - 1) as f64);
    let i = (pos.floor() as usize).min(ts.len() - 2);
    let f = pos - i as f64;
    if f == 0.0 {
        return vals[i].clone();
    }
    &vals[i] * Complex64::new(1.0 - f, 0.0) + &vals[i + 1] * Complex64::new(f, 0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub enum OperatorPath {
    Polynomial(MatPoly<Complex64>),
    Sampled(SampledPath),
}

impl OperatorPath {
    /// `t ↦ A + tB`
    pub fn linear(a: DenseOp, b: DenseOp) -> Self {
        let d = a.nrows();
        OperatorPath::Polynomial(MatPoly::from_coeffs(d, vec![a, b]))
    }

    pub fn constant(a: DenseOp) -> Self {
        OperatorPath::Polynomial(MatPoly::constant(a))
    }

    pub fn dim(&self) -> usize {
        match self {
            OperatorPath::Polynomial(p) => p.dim(),
            OperatorPath::Sampled(s) => s.dim(),
        }
    }

    pub fn eval(&self, t: f64) -> DenseOp {
        match self {
            OperatorPath::Polynomial(p) => p.eval(&Complex64::new(t, 0.0)),
            OperatorPath::Sampled(s) => interpolate(&s.ts, &s.mats, t),
        }
    }

    /// Largest operator norm over the sample grid (101 uniform points for a
    /// polynomial path).
    pub fn max_norm(&self) -> f64 {
        match self {
            OperatorPath::Polynomial(p) => (0..=100)
                .map(|i| op_norm(&p.eval(&Complex64::new(i as f64 / 100.0, 0.0))))
                .fold(0.0, f64::max),
            OperatorPath::Sampled(s) => s.mats.iter().map(op_norm).fold(0.0, f64::max),
        }
    }
}
