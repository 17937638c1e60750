//! `π₀(x) − π₁(x) = (bJ)(y)` for `x = γ₀ = w^n − v^n` and `y = −γ₂`, so
//! that `b(y) = B(x)`. In degree 0 the cyclic quotient is trivial and the
//! identity holds between matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::sampled::{jay_sampled, SampledChain, SampledLeg};
use super::{jay, HomotopyError, MatPoly, OperatorPath, PathChain};
use crate::cyclic::gamma2_tensors;
use crate::freealg::{FreePoly, UnitalAlgebra};
use crate::scalar::{adjoint, frobenius, gq_to_c64, Scalar};
use crate::tensor::MatChain;

fn gamma0(n: u32) -> FreePoly {
    &FreePoly::w().pow(n) - &FreePoly::v().pow(n)
}

fn gamma2(n: u32) -> Result<Vec<(crate::scalar::Gq, Vec<FreePoly>)>, HomotopyError> {
    if n == 0 {
        return Err(HomotopyError::ZeroDegree);
    }
    gamma2_tensors(n).map_err(|_| HomotopyError::ZeroDegree)
}

/// Evaluates each distinct leg once.
fn eval_legs<A: UnitalAlgebra>(legs: &[FreePoly], cache: &mut Vec<(FreePoly, A)>, x: &A, y: &A) -> Vec<A> {
    legs.iter()
        .map(|p| {
            if let Some((_, v)) = cache.iter().find(|(q, _)| q == p) {
                return v.clone();
            }
            let v = p.evaluate_in(x, y);
            cache.push((p.clone(), v.clone()));
            v
        })
        .collect()
}

/// The path chain `π_·(−γ₂)`.
pub fn minus_gamma2_chain<S: Scalar>(path: &MatPoly<S>, n: u32) -> Result<PathChain<S>, HomotopyError> {
    let (x, y) = (path.clone(), path.adjoint());
    let mut cache = Vec::new();
    let mut out = PathChain::new(2, path.dim());
    for (c, legs) in gamma2(n)? {
        out.push(-S::from_gq(&c), eval_legs(&legs, &mut cache, &x, &y))?;
    }
    Ok(out)
}

fn endpoint_difference<S: Scalar>(t0: &DMatrix<S>, t1: &DMatrix<S>, n: u32) -> DMatrix<S> {
    let g = gamma0(n);
    let a = g.evaluate_in(t0, &adjoint(t0));
    sub(&a, &g.evaluate_in(t1, &adjoint(t1)))
}

fn sub<S: Scalar>(a: &DMatrix<S>, b: &DMatrix<S>) -> DMatrix<S> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| {
        let mut z = a[(i, j)].clone();
        z -= b[(i, j)].clone();
        z
    })
}

/// `π₀(γ₀) − π₁(γ₀) − (bJ)(−γ₂)` for a polynomial path over any scalar
/// field. Over `ℚ(i)` this is exactly zero.
pub fn transgression_exact<S: Scalar>(path: &MatPoly<S>, n: u32) -> Result<DMatrix<S>, HomotopyError> {
    let y = minus_gamma2_chain(path, n)?;
    let rhs = jay(&y)?.hochschild_b().multiply_out();
    let lhs = endpoint_difference(&path.eval(&S::zero()), &path.eval(&S::one()), n);
    Ok(sub(&lhs, &rhs))
}

fn pow<S: Scalar>(p: &MatPoly<S>, n: u32) -> MatPoly<S> {
    (0..n).fold(MatPoly::identity(p.dim()), |acc, _| acc.mul(p))
}

/// `Ω = Σ_{j<n} (R⁻)^j T` and `Σ_{j<n} T (R⁺)^j` with `R⁺ = 1 − T*T`,
/// `R⁻ = 1 − TT*`.
fn omega_forms<S: Scalar>(t: &MatPoly<S>, n: u32) -> (MatPoly<S>, MatPoly<S>) {
    let ts = t.adjoint();
    let one = MatPoly::identity(t.dim());
    let (rp, rm) = (one.sub(&ts.mul(t)), one.sub(&t.mul(&ts)));
    let mut left = MatPoly::zero(t.dim());
    let mut right = MatPoly::zero(t.dim());
    for j in 0..n {
        left = left.add(&pow(&rm, j).mul(t));
        right = right.add(&t.mul(&pow(&rp, j)));
    }
    (left, right)
}

fn poly_gap<S: Scalar>(a: &MatPoly<S>, b: &MatPoly<S>) -> f64 {
    a.sub(b).coeffs().iter().map(frobenius).fold(0.0, f64::max)
}

/// Largest coefficient norm of the difference between the two forms of `Ω`.
pub fn omega_forms_check<S: Scalar>(t: &MatPoly<S>, n: u32) -> f64 {
    let (l, r) = omega_forms(t, n);
    poly_gap(&l, &r)
}

/// `J(γ₂)` from the expanded formula
/// `−∫(R⁺)^n (T*)' ⊗ Ω + ∫(R⁻)^n Ω' ⊗ T* − ∫Ω ((R⁺)^n)' ⊗ T* + ∫Ω (T*)' ⊗ (R⁻)^n`,
/// with `((R⁺)^n)'` assembled by the product rule.
fn explicit_jay_gamma2(t: &MatPoly<Complex64>, n: u32) -> MatChain<Complex64> {
    let ts = t.adjoint();
    let one = MatPoly::identity(t.dim());
    let (rp, rm) = (one.sub(&ts.mul(t)), one.sub(&t.mul(&ts)));
    let (om, _) = omega_forms(t, n);
    let (rpn, rmn) = (pow(&rp, n), pow(&rm, n));
    let drp = rp.derivative();
    let mut drpn = MatPoly::zero(t.dim());
    for j in 0..n {
        drpn = drpn.add(&pow(&rp, j).mul(&drp).mul(&pow(&rp, n - 1 - j)));
    }
    let dts = ts.derivative();
    let terms: [(f64, MatPoly<Complex64>, &MatPoly<Complex64>); 4] = [
        (-1.0, rpn.mul(&dts), &om),
        (1.0, rmn.mul(&om.derivative()), &ts),
        (-1.0, om.mul(&drpn), &ts),
        (1.0, om.mul(&dts), &rmn),
    ];
    let mut out = MatChain::new(1, t.dim());
    for (c, a, b) in terms {
        let deg = a.degree() + b.degree();
        for (s, w) in crate::scalar::gauss_legendre_unit(deg / 2 + 1) {
            let s = Complex64::new(s, 0.0);
            out.push(Complex64::new(c * w, 0.0), vec![a.eval(&s), b.eval(&s)]);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransgressionReport {
    pub n: u32,
    pub dim: usize,
    /// Frobenius norm of `π₀(γ₀) − π₁(γ₀) − (bJ)(−γ₂)`.
    pub residual: f64,
    pub tolerance: f64,
    pub max_norm: f64,
    /// Gap between the left and right forms of `Ω`.
    pub omega_forms_defect: f64,
    /// Coordinate norm of `J(γ₂)` from the free-algebra route minus the
    /// expanded formula (polynomial paths only).
    pub explicit_defect: Option<f64>,
    /// Half-grid error estimate of the right-hand side (sampled paths only).
    pub quadrature_estimate: Option<f64>,
    pub pass: bool,
}

/// `1e−9 · d · (1 + max‖T_t‖)³`
pub fn transgression_tolerance(dim: usize, max_norm: f64) -> f64 {
    1e-9 * dim as f64 * (1.0 + max_norm).powi(3)
}

pub fn transgression_check(path: &OperatorPath, n: u32) -> Result<TransgressionReport, HomotopyError> {
    if n == 0 {
        return Err(HomotopyError::ZeroDegree);
    }
    let dim = path.dim();
    let max_norm = path.max_norm();
    let tolerance = transgression_tolerance(dim, max_norm);
    match path {
        OperatorPath::Polynomial(p) => {
            let residual = transgression_exact(p, n)?.norm();
            let omega_forms_defect = omega_forms_check(p, n);
            let mut via_free = jay(&minus_gamma2_chain(p, n)?)?;
            via_free.extend(&explicit_jay_gamma2(p, n), &Complex64::new(1.0, 0.0));
            let explicit = via_free.coordinate_norm();
            let pass = residual <= tolerance && omega_forms_defect <= tolerance && explicit <= tolerance;
            Ok(TransgressionReport {
                n,
                dim,
                residual,
                tolerance,
                max_norm,
                omega_forms_defect,
                explicit_defect: Some(explicit),
                quadrature_estimate: None,
                pass,
            })
        }
        OperatorPath::Sampled(sp) => {
            let x = SampledLeg(sp.samples().to_vec());
            let y = SampledLeg(sp.samples().iter().map(|m| m.adjoint()).collect());
            let mut chain = SampledChain::new(2, dim, sp.samples().len())?;
            let mut cache = Vec::new();
            for (c, legs) in gamma2(n)? {
                chain.push(-gq_to_c64(&c), eval_legs(&legs, &mut cache, &x, &y))?;
            }
            let j = jay_sampled(&chain)?;
            let rhs_fine = j.fine.hochschild_b().multiply_out();
            let rhs_coarse = j.coarse.hochschild_b().multiply_out();
            let samples = sp.samples();
            let lhs = endpoint_difference(&samples[0], &samples[samples.len() - 1], n);
            let residual = (lhs - &rhs_fine).norm();
            let estimate = (&rhs_fine - rhs_coarse).norm();
            let omega_forms_defect = samples
                .iter()
                .map(|m| omega_forms_check(&MatPoly::constant(m.clone()), n))
                .fold(0.0, f64::max);
            let pass = residual <= estimate + tolerance && omega_forms_defect <= tolerance;
            Ok(TransgressionReport {
                n,
                dim,
                residual,
                tolerance,
                max_norm,
                omega_forms_defect,
                explicit_defect: None,
                quadrature_estimate: Some(estimate),
                pass,
            })
        }
    }
}
