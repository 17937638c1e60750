//! Bounded transform `D ↦ D(1 + D*D)^{−1/2}` and the integral
//! representation of `(1 + D²)^{−1/2}`.

use nalgebra::{Cholesky, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_square, ensure_hermitian, identity, op_norm, DenseOp, NumopError, Residual};
use crate::scalar::gauss_legendre_unit;

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `f(H)` for Hermitian `H` through its eigendecomposition.
pub fn hermitian_function(h: &DenseOp, f: impl Fn(f64) -> f64) -> DenseOp {
    let sym = (h + h.adjoint()) * real(0.5);
    let eig = SymmetricEigen::new(sym);
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, lam) in eig.eigenvalues.iter().enumerate() {
        let fj = real(f(*lam));
        for z in scaled.column_mut(j).iter_mut() {
            *z *= fj;
        }
    }
    scaled * v.adjoint()
}

fn inverse(a: &DenseOp, what: &'static str) -> Result<DenseOp, NumopError> {
    a.clone().try_inverse().ok_or(NumopError::Singular(what))
}

#[derive(Clone, Debug)]
pub struct BoundedTransform {
    pub t: DenseOp,
    pub residuals: Vec<Residual>,
}

/// `T = D(1 + D*D)^{−1/2}` together with the residuals of
/// `1 − T*T = (1 + D*D)^{−1}` and `1 − TT* = (1 + DD*)^{−1}`, the inverses
/// taken by LU rather than through the eigendecomposition.
pub fn bounded_transform(d: &DenseOp) -> Result<BoundedTransform, NumopError> {
    let n = check_square(d)?;
    let dsd = d.adjoint() * d;
    let root = hermitian_function(&dsd, |l| 1.0 / (1.0 + l.max(0.0)).sqrt());
    let t = d * root;
    let one = identity(n);
    let inv_plus = inverse(&(&one + &dsd), "1 + D*D")?;
    let inv_minus = inverse(&(&one + d * d.adjoint()), "1 + DD*")?;
    let r_plus = ((&one - t.adjoint() * &t) - inv_plus).norm();
    let r_minus = ((&one - &t * t.adjoint()) - inv_minus).norm();
    Ok(BoundedTransform {
        t,
        residuals: vec![
            Residual::below("bounded_transform:1-T*T", r_plus, 1e-10),
            Residual::below("bounded_transform:1-TT*", r_minus, 1e-10),
        ],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    /// Truncation point in `u = √μ`.
    pub upper: f64,
    pub panels: usize,
    pub nodes: usize,
    /// Terms of the large-`u` expansion used for `[U, ∞)`.
    pub tail_terms: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { upper: 1e4, panels: 64, nodes: 16, tail_terms: 4 }
    }
}

#[derive(Clone, Debug)]
pub struct QuadratureResult {
    pub value: DenseOp,
    /// Largest entry difference between the `nodes` and `nodes/2` rules.
    pub rule_error: f64,
    /// Norm bound on the neglected part of the `[U, ∞)` expansion.
    pub tail_remainder: f64,
}

impl QuadratureResult {
    pub fn error_estimate(&self) -> f64 {
        self.rule_error + self.tail_remainder
    }
}

/// `(1 + D²)^{−1/2} = (2/π) ∫₀^∞ (1 + u² + D²)^{−1} du` (after `μ = u²`).
///
/// `[0, U]` is covered by geometrically graded Gauss–Legendre panels with
/// breakpoints `(U+1)^{j/P} − 1`. On `[U, ∞)` the resolvent is expanded as
/// `Σ (−1)^k B^k u^{−2k−2}` with `B = 1 + D²`, integrated termwise.
pub fn inverse_sqrt_quadrature(d: &DenseOp, cfg: &QuadratureConfig) -> Result<QuadratureResult, NumopError> {
    ensure_hermitian(d, 1e-10)?;
    if !(cfg.upper > 1.0) || cfg.panels == 0 || cfg.nodes < 2 {
        return Err(NumopError::InvalidParameter(format!("bad quadrature configuration {cfg:?}")));
    }
    let n = d.nrows();
    let one = identity(n);
    let b = &one + d * d;
    let b_norm = op_norm(&b);
    let u2 = cfg.upper * cfg.upper;
    if b_norm >= u2 {
        return Err(NumopError::InvalidParameter(format!(
            "‖1 + D²‖ = {b_norm:.3e} exceeds U² = {u2:.3e}; raise the truncation point"
        )));
    }

    let fine = composite(&b, cfg, cfg.nodes)?;
    let coarse = composite(&b, cfg, (cfg.nodes / 2).max(1))?;
    let rule_error = (&fine - &coarse).iter().map(|z| z.norm()).fold(0.0, f64::max);

    let mut tail = DenseOp::zeros(n, n);
    let mut bk = one.clone();
    for k in 0..cfg.tail_terms {
        let c = cfg.upper.powi(-(2 * k as i32 + 1)) / (2 * k + 1) as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        tail += &bk * real(sign * c);
        bk = &bk * &b;
    }
    let m = cfg.tail_terms as i32;
    let tail_remainder = (2.0 / std::f64::consts::PI) * b_norm.powi(m) * cfg.upper.powi(-(2 * m + 1))
        / (2 * m + 1) as f64
        / (1.0 - b_norm / u2);

    let value = (fine + tail) * real(2.0 / std::f64::consts::PI);
    Ok(QuadratureResult { value, rule_error: rule_error * 2.0 / std::f64::consts::PI, tail_remainder })
}

fn composite(b: &DenseOp, cfg: &QuadratureConfig, nodes: usize) -> Result<DenseOp, NumopError> {
    let n = b.nrows();
    let rule = gauss_legendre_unit(nodes);
    let mut acc = DenseOp::zeros(n, n);
    let break_at = |j: usize| (cfg.upper + 1.0).powf(j as f64 / cfg.panels as f64) - 1.0;
    for j in 0..cfg.panels {
        let (a, c) = (break_at(j), break_at(j + 1));
        let h = c - a;
        for (s, w) in &rule {
            let u = a + h * s;
            let mut m = b.clone();
            for i in 0..n {
                m[(i, i)] += real(u * u);
            }
            let inv = Cholesky::new(m).ok_or(NumopError::Singular("1 + u² + D²"))?.inverse();
            acc += inv * real(w * h);
        }
    }
    Ok(acc)
}

/// Reference value of `(1 + D²)^{−1/2}` from the eigendecomposition of `D`.
pub fn inverse_sqrt_eig(d: &DenseOp) -> Result<DenseOp, NumopError> {
    ensure_hermitian(d, 1e-10)?;
    Ok(hermitian_function(d, |l| 1.0 / (1.0 + l * l).sqrt()))
}

/// Largest entry difference between the quadrature and the reference.
pub fn inverse_sqrt_check(d: &DenseOp, cfg: &QuadratureConfig, tol: f64) -> Result<Residual, NumopError> {
    let q = inverse_sqrt_quadrature(d, cfg)?;
    let reference = inverse_sqrt_eig(d)?;
    let err = (&q.value - reference).iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(Residual::below("inverse_sqrt_quadrature", err, tol).with_bound(q.error_estimate()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_hermitian, random_matrix, rng};
    use nalgebra::DMatrix;

    #[test]
    fn diagonal_transform() {
        let vals = [0.0, 1.0, -2.0, 5.0];
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(4, vals.iter().map(|x| real(*x))));
        let bt = bounded_transform(&d).unwrap();
        for (i, x) in vals.iter().enumerate() {
            assert!((bt.t[(i, i)].re - x / (1.0 + x * x).sqrt()).abs() < 1e-14);
        }
        let z = bounded_transform(&DenseOp::zeros(3, 3)).unwrap();
        assert_eq!(z.t, DenseOp::zeros(3, 3));
    }

    #[test]
    fn transform_residuals_random() {
        let mut r = rng(8);
        for d in [6, 64] {
            let m = random_matrix(&mut r, d, 3.0);
            let bt = bounded_transform(&m).unwrap();
            assert!(bt.residuals.iter().all(|x| x.pass), "{:?}", bt.residuals);
        }
    }

    #[test]
    fn quadrature_scalars() {
        let cfg = QuadratureConfig::default();
        let q0 = inverse_sqrt_quadrature(&DenseOp::zeros(1, 1), &cfg).unwrap();
        assert!((q0.value[(0, 0)].re - 1.0).abs() < 1e-12);
        let q1 = inverse_sqrt_quadrature(&DenseOp::identity(1, 1), &cfg).unwrap();
        assert!((q1.value[(0, 0)].re - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn quadrature_matches_eigendecomposition() {
        let mut r = rng(13);
        let h = random_hermitian(&mut r, 8, 2.0);
        let res = inverse_sqrt_check(&h, &QuadratureConfig::default(), 1e-6).unwrap();
        assert!(res.pass, "{res:?}");
        assert!(res.value < 1e-10, "{res:?}");
    }

    #[test]
    fn quadrature_rejects_non_hermitian() {
        let mut r = rng(1);
        let a = random_matrix(&mut r, 3, 1.0);
        assert!(matches!(
            inverse_sqrt_quadrature(&a, &QuadratureConfig::default()),
            Err(NumopError::NotHermitian(_))
        ));
    }
}
