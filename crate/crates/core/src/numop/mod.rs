//! Dense complex operators: traces, Schatten norms, the homological index of
//! a matrix, and the trace-cocycle and chain-norm checks.
//!
//! Structured weighted shifts live in [`shift`], the bounded transform and
//! the inverse square root in [`transform`], resolvent identities in
//! [`resolvent`].

pub mod io;
pub mod resolvent;
pub mod shift;
pub mod transform;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::freealg::{Evaluation, FreePoly};
use crate::tensor::{rotations, MatChain};

/// Finite complex matrix.
pub type DenseOp = DMatrix<Complex64>;

#[derive(Debug, Error)]
pub enum NumopError {
    #[error("operator must be square, got {0}x{1}")]
    NonSquare(usize, usize),
    #[error("operator is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular: {0}")]
    Singular(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("defect series is not summable for n = {n}: {reason}")]
    NotSummable { n: u32, reason: String },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// One numerical check: a measured value against a tolerance, optionally
/// with a certified bound on the quantity itself.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub name: String,
    pub value: f64,
    pub bound: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

impl Residual {
    /// Passes iff `value < tolerance` (and is finite).
    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Residual { name: name.into(), value, bound: None, tolerance, pass: value.is_finite() && value < tolerance }
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = Some(bound);
        self
    }
}

pub fn all_pass(rs: &[Residual]) -> bool {
    rs.iter().all(|r| r.pass)
}

pub fn max_value(rs: &[Residual]) -> f64 {
    rs.iter().map(|r| r.value).fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchattenReport {
    pub p: f64,
    pub value: f64,
    pub singular_values: Vec<f64>,
}

impl SchattenReport {
    /// Report for an operator with the given singular values (any order).
    pub fn from_singular_values(mut sv: Vec<f64>, p: f64) -> Result<Self, NumopError> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(NumopError::InvalidParameter(format!("Schatten exponent {p} must be a finite p >= 1")));
        }
        sv.iter_mut().for_each(|s| *s = s.abs());
        sv.sort_by(|a, b| b.total_cmp(a));
        let value = schatten_sum(&sv, p);
        Ok(SchattenReport { p, value, singular_values: sv })
    }
}

/// `(Σ σ^p)^{1/p}` evaluated with the largest value factored out.
fn schatten_sum(sv: &[f64], p: f64) -> f64 {
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    if p == 1.0 {
        return sv.iter().sum();
    }
    top * sv.iter().map(|s| (s / top).powf(p)).sum::<f64>().powf(1.0 / p)
}

pub fn check_square(a: &DenseOp) -> Result<usize, NumopError> {
    if a.is_square() {
        Ok(a.nrows())
    } else {
        Err(NumopError::NonSquare(a.nrows(), a.ncols()))
    }
}

pub fn singular_values(a: &DenseOp) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    a.clone().singular_values().iter().cloned().collect()
}

pub fn schatten_norm(a: &DenseOp, p: f64) -> Result<SchattenReport, NumopError> {
    check_square(a)?;
    SchattenReport::from_singular_values(singular_values(a), p)
}

pub fn trace_norm(a: &DenseOp) -> f64 {
    singular_values(a).iter().sum()
}

pub fn op_norm(a: &DenseOp) -> f64 {
    singular_values(a).iter().cloned().fold(0.0, f64::max)
}

pub fn identity(d: usize) -> DenseOp {
    DMatrix::identity(d, d)
}

/// Maximum of `‖A − A*‖` entries, zero for Hermitian input.
pub fn hermitian_defect(a: &DenseOp) -> f64 {
    (a - a.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn ensure_hermitian(a: &DenseOp, tol: f64) -> Result<(), NumopError> {
    check_square(a)?;
    let defect = hermitian_defect(a);
    let scale = 1.0 + a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if defect > tol * scale {
        Err(NumopError::NotHermitian(defect))
    } else {
        Ok(())
    }
}

pub fn matrix_power(a: &DenseOp, n: u32) -> DenseOp {
    let mut acc = identity(a.nrows());
    for _ in 0..n {
        acc = &acc * a;
    }
    acc
}

/// `(1 − T*T)^n − (1 − TT*)^n`
pub fn index_difference(t: &DenseOp, n: u32) -> DenseOp {
    let d = t.nrows();
    let rp = identity(d) - t.adjoint() * t;
    let rm = identity(d) - t * t.adjoint();
    matrix_power(&rp, n) - matrix_power(&rm, n)
}

/// `Tr((1 − T*T)^n − (1 − TT*)^n)`. For matrices the exact value is 0; the
/// returned real part measures rounding.
pub fn hind_dense(t: &DenseOp, n: u32) -> Result<f64, NumopError> {
    check_square(t)?;
    Ok(index_difference(t, n).trace().re)
}

/// `|Tr(x₀x₁) − Tr(x₁x₀)|` against `1e−10 · d · ‖x₀‖ ‖x₁‖`.
pub fn trace_cocycle_check(x0: &DenseOp, x1: &DenseOp) -> Result<Residual, NumopError> {
    let d = check_square(x0)?;
    if x1.shape() != x0.shape() {
        return Err(NumopError::Shape(format!("{:?} vs {:?}", x0.shape(), x1.shape())));
    }
    let defect = ((x0 * x1).trace() - (x1 * x0).trace()).norm();
    let tol = 1e-10 * d as f64 * op_norm(x0) * op_norm(x1);
    let mut r = Residual::below("trace_cocycle", defect, tol.max(f64::MIN_POSITIVE));
    r.pass = defect <= tol;
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KnChainNorm {
    pub degree: usize,
    pub value: f64,
}

/// Upper bound for the chain norm evaluated on the given decomposition:
/// `Σ_j ( Σ_i ‖M(t^i x^j)‖₁ + Π_i ‖x^j_i‖ )`, coefficients folded into the
/// first leg.
pub fn kn_norm_upper(chain: &MatChain<Complex64>) -> Result<KnChainNorm, NumopError> {
    let mut value = 0.0;
    for (c, legs) in &chain.terms {
        if legs.len() != chain.degree + 1 {
            return Err(NumopError::Shape(format!("term has {} legs for degree {}", legs.len(), chain.degree)));
        }
        for l in legs {
            if l.shape() != (chain.dim, chain.dim) {
                return Err(NumopError::Shape(format!("leg {:?} in dimension {}", l.shape(), chain.dim)));
            }
        }
        let mut scaled = legs.clone();
        scaled[0] *= *c;
        for (sign, rot) in rotations(&scaled) {
            let mut prod = rot[0].clone();
            for l in &rot[1..] {
                prod *= l;
            }
            prod *= Complex64::new(sign as f64, 0.0);
            value += trace_norm(&prod);
        }
        value += scaled.iter().map(op_norm).product::<f64>();
    }
    Ok(KnChainNorm { degree: chain.degree, value })
}

/// Trace of `π(w^n − v^n)` under `x ↦ T`, `y ↦ T*` against [`hind_dense`].
pub fn pairing_check_dense(t: &DenseOp, n: u32) -> Result<Residual, NumopError> {
    let d = check_square(t)?;
    let ev = Evaluation::adjoint_pair(t).map_err(|e| NumopError::Shape(e.to_string()))?;
    let g0 = &FreePoly::w().pow(n) - &FreePoly::v().pow(n);
    let pairing = g0.evaluate(&ev).trace().re;
    let index = hind_dense(t, n)?;
    let scale = 1.0 + op_norm(t).powi(2 * n as i32);
    Ok(Residual::below("pairing_dense", (pairing - index).abs(), 1e-10 * d as f64 * scale).with_bound(index.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_matrix, rng};

    fn diag(v: &[f64]) -> DenseOp {
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            v.len(),
            v.iter().map(|x| Complex64::new(*x, 0.0)),
        ))
    }

    #[test]
    fn schatten_examples() {
        let a = diag(&[3.0, 4.0]);
        assert!((schatten_norm(&a, 1.0).unwrap().value - 7.0).abs() < 1e-12);
        assert!((schatten_norm(&a, 2.0).unwrap().value - 5.0).abs() < 1e-12);
        assert_eq!(schatten_norm(&a, 2.0).unwrap().singular_values, vec![4.0, 3.0]);
        assert!(schatten_norm(&a, 0.5).is_err());
        assert!(schatten_norm(&DMatrix::zeros(2, 3), 1.0).is_err());
    }

    #[test]
    fn trace_norm_dominates_trace() {
        let mut r = rng(3);
        for _ in 0..10 {
            let a = random_matrix(&mut r, 7, 1.0);
            assert!(trace_norm(&a) + 1e-10 >= a.trace().norm());
        }
    }

    #[test]
    fn hind_dense_vanishes() {
        let mut r = rng(5);
        let t = random_matrix(&mut r, 8, 1.0);
        for n in 1..=3 {
            assert!(hind_dense(&t, n).unwrap().abs() < 1e-10);
        }
        let u = diag(&[1.0, 1.0, 1.0]);
        assert_eq!(hind_dense(&u, 2).unwrap(), 0.0);
        assert_eq!(hind_dense(&DMatrix::zeros(4, 4), 3).unwrap(), 0.0);
    }

    #[test]
    fn trace_cocycle_examples() {
        let a = diag(&[1.0, 2.0]);
        let b = diag(&[5.0, -1.0]);
        assert_eq!(trace_cocycle_check(&a, &b).unwrap().value, 0.0);
        let mut r = rng(9);
        let x = random_matrix(&mut r, 16, 1.0);
        let y = random_matrix(&mut r, 16, 1.0);
        assert!(trace_cocycle_check(&x, &y).unwrap().pass);
        assert!(trace_cocycle_check(&x, &x.adjoint()).unwrap().pass);
    }

    #[test]
    fn kn_norm_identity_pair() {
        let d = 5;
        let mut c = MatChain::new(1, d);
        c.push(Complex64::new(1.0, 0.0), vec![identity(d), identity(d)]);
        let v = kn_norm_upper(&c).unwrap().value;
        assert!((v - (2 * d + 1) as f64).abs() < 1e-10);
        assert_eq!(kn_norm_upper(&MatChain::new(2, 3)).unwrap().value, 0.0);
    }

    #[test]
    fn kn_norm_bounds_trace_on_degree_zero() {
        let mut r = rng(11);
        for _ in 0..10 {
            let mut c = MatChain::new(0, 4);
            for _ in 0..3 {
                c.push(Complex64::new(1.0, 0.0), vec![random_matrix(&mut r, 4, 1.0)]);
            }
            let tr = c.multiply_out().trace().norm();
            assert!(tr <= kn_norm_upper(&c).unwrap().value + 1e-12);
        }
    }

    #[test]
    fn pairing_dense_examples() {
        let mut r = rng(2);
        let t = random_matrix(&mut r, 6, 1.0);
        assert!(pairing_check_dense(&t, 2).unwrap().pass);
        let z = pairing_check_dense(&DMatrix::zeros(3, 3), 2).unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn holder_inequality() {
        let mut r = rng(21);
        for (p, q) in [(2.0, 2.0), (3.0, 1.5), (4.0, 4.0 / 3.0)] {
            let a = random_matrix(&mut r, 6, 1.0);
            let b = random_matrix(&mut r, 6, 1.0);
            let lhs = trace_norm(&(&a * &b));
            let rhs = schatten_norm(&a, p).unwrap().value * schatten_norm(&b, q).unwrap().value;
            assert!(lhs <= rhs * (1.0 + 1e-9));
        }
    }
}
