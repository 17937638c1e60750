use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use super::{HomotopyError, MatPoly};
use crate::sample::rng;
use crate::scalar::{Gq, Scalar};
use crate::tensor::{connes_terms, faces, MatChain};

/// Linear combination of elementary tensors whose legs are polynomial paths
/// of one common dimension.
#[derive(Clone, Debug)]
pub struct PathChain<S: Scalar> {
    pub degree: usize,
    pub dim: usize,
    pub terms: Vec<(S, Vec<MatPoly<S>>)>,
}

impl<S: Scalar> PathChain<S> {
    pub fn new(degree: usize, dim: usize) -> Self {
        PathChain { degree, dim, terms: Vec::new() }
    }

    pub fn push(&mut self, c: S, legs: Vec<MatPoly<S>>) -> Result<(), HomotopyError> {
        if legs.len() != self.degree + 1 {
            return Err(HomotopyError::Mismatch(format!("{} legs in a degree-{} chain", legs.len(), self.degree)));
        }
        if legs.iter().any(|l| l.dim() != self.dim) {
            return Err(HomotopyError::Mismatch(format!("leg dimension differs from {}", self.dim)));
        }
        self.terms.push((c, legs));
        Ok(())
    }

    fn apply(&self, degree: usize, op: impl Fn(&[MatPoly<S>]) -> Vec<(i64, Vec<MatPoly<S>>)>) -> Self {
        let mut out = PathChain::new(degree, self.dim);
        for (c, legs) in &self.terms {
            for (sign, t) in op(legs) {
                out.terms.push((if sign < 0 { -c.clone() } else { c.clone() }, t));
            }
        }
        out
    }

    pub fn hochschild_b(&self) -> Self {
        self.apply(self.degree.saturating_sub(1), faces)
    }

    pub fn connes_b(&self) -> Self {
        self.apply(self.degree + 1, connes_terms)
    }

    /// The matrix chain `π_t(c)` obtained by evaluating every leg at `t`.
    pub fn eval(&self, t: &S) -> MatChain<S> {
        let mut out = MatChain::new(self.degree, self.dim);
        for (c, legs) in &self.terms {
            out.push(c.clone(), legs.iter().map(|l| l.eval(t)).collect());
        }
        out
    }
}

/// Integrates `s ↦ c·f₀(s) ⊗ f₁(s) ⊗ …` exactly with a rule of the given
/// polynomial degree, appending the node tensors to `out`.
fn integrate_into<S: Scalar>(out: &mut MatChain<S>, c: &S, legs: &[MatPoly<S>]) {
    if legs.iter().any(MatPoly::is_zero) {
        return;
    }
    let degree: usize = legs.iter().map(MatPoly::degree).sum();
    for (s, w) in S::poly_rule(degree) {
        let mut coeff = c.clone();
        coeff *= w;
        out.push(coeff, legs.iter().map(|l| l.eval(&s)).collect());
    }
}

/// `J` on a polynomial path chain of degree `n+1 >= 1`, exact up to the
/// field's rounding.
pub fn jay<S: Scalar>(c: &PathChain<S>) -> Result<MatChain<S>, HomotopyError> {
    if c.degree == 0 {
        return Err(HomotopyError::DegreeZero);
    }
    let mut out = MatChain::new(c.degree - 1, c.dim);
    for (coeff, legs) in &c.terms {
        let mut integrand = Vec::with_capacity(legs.len() - 1);
        integrand.push(legs[0].mul(&legs[1].derivative()));
        integrand.extend_from_slice(&legs[2..]);
        integrate_into(&mut out, coeff, &integrand);
    }
    Ok(out)
}

/// `Σ_i (−1)^{i·n} ∫₀¹ (dx^i/dt)_s ⊗ x^{i+1}_s ⊗ … ⊗ x^n_s ⊗ x⁰_s ⊗ … ⊗ x^{i−1}_s ds`
pub fn jb_formula_rhs<S: Scalar>(c: &PathChain<S>) -> MatChain<S> {
    let n = c.degree;
    let mut out = MatChain::new(n, c.dim);
    for (coeff, legs) in &c.terms {
        for i in 0..=n {
            let mut integrand = Vec::with_capacity(n + 1);
            integrand.push(legs[i].derivative());
            integrand.extend(legs[i + 1..].iter().cloned());
            integrand.extend(legs[..i].iter().cloned());
            let sc = if (i * n) % 2 == 1 { -coeff.clone() } else { coeff.clone() };
            integrate_into(&mut out, &sc, &integrand);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JbReport {
    /// Largest coordinate of the difference.
    pub defect: f64,
    /// Every coordinate of the difference is exactly zero.
    pub exact_zero: bool,
}

fn report<S: Scalar>(c: &MatChain<S>) -> JbReport {
    let flat = c.flatten();
    JbReport {
        defect: flat.iter().map(|z| z.to_c64().norm()).fold(0.0, f64::max),
        exact_zero: flat.iter().all(|z| z.is_zero()),
    }
}

/// Compares `J(B(c))` with [`jb_formula_rhs`].
pub fn jb_formula_check<S: Scalar>(c: &PathChain<S>) -> Result<JbReport, HomotopyError> {
    let mut diff = jay(&c.connes_b())?;
    diff.extend(&jb_formula_rhs(c), &-S::one());
    Ok(report(&diff))
}

/// `bJ(c) + Jb(c)` for a chain of degree at least 2.
pub fn bj_plus_jb<S: Scalar>(c: &PathChain<S>) -> Result<JbReport, HomotopyError> {
    if c.degree < 2 {
        return Err(HomotopyError::Mismatch(format!("bJ + Jb needs degree >= 2, got {}", c.degree)));
    }
    let mut sum = jay(c)?.hochschild_b();
    sum.extend(&jay(&c.hochschild_b())?, &S::one());
    Ok(report(&sum))
}

fn small_gq<R: Rng>(r: &mut R) -> Gq {
    Gq::new(
        num_rational::BigRational::from_integer(r.random_range(-2i64..=2).into()),
        num_rational::BigRational::from_integer(r.random_range(-1i64..=1).into()),
    )
}

/// Seeded random chain over `ℚ(i)` with `terms` tensors whose legs are
/// polynomial paths of degree `<= path_degree` with small Gaussian-integer
/// coefficients.
pub fn random_poly_chain(seed: u64, degree: usize, dim: usize, path_degree: usize, terms: usize) -> PathChain<Gq> {
    let mut r = rng(seed);
    let mut out = PathChain::new(degree, dim);
    for _ in 0..terms {
        let legs = (0..=degree)
            .map(|_| {
                let deg = r.random_range(0..=path_degree);
                let coeffs = (0..=deg).map(|_| DMatrix::from_fn(dim, dim, |_, _| small_gq(&mut r))).collect();
                MatPoly::from_coeffs(dim, coeffs)
            })
            .collect();
        let c = small_gq(&mut r);
        out.push(c, legs).expect("legs built with matching shape");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gq_int;
    use num_complex::Complex64;

    #[test]
    fn constant_paths_have_zero_jay() {
        let m = DMatrix::from_fn(2, 2, |i, j| Complex64::new((i + 2 * j) as f64, 1.0));
        let mut c = PathChain::new(2, 2);
        c.push(Complex64::new(1.0, 0.0), vec![MatPoly::constant(m.clone()); 3]).unwrap();
        assert!(jay(&c).unwrap().terms.is_empty());
    }

    #[test]
    fn linear_leg_integrates_to_its_slope() {
        let a = DMatrix::from_fn(2, 2, |i, j| gq_int((3 * i + j) as i64 - 1));
        let zero = DMatrix::from_element(2, 2, gq_int(0));
        let mut c = PathChain::new(1, 2);
        c.push(gq_int(1), vec![MatPoly::identity(2), MatPoly::from_coeffs(2, vec![zero, a.clone()])]).unwrap();
        let j = jay(&c).unwrap();
        assert_eq!(j.multiply_out(), a);
    }

    #[test]
    fn degree_zero_jb_is_endpoint_difference() {
        let p = random_poly_chain(11, 0, 2, 3, 1);
        let rhs = jb_formula_rhs(&p);
        let (c, legs) = &p.terms[0];
        let mut expected = legs[0].eval(&gq_int(1)) - legs[0].eval(&gq_int(0));
        expected.iter_mut().for_each(|z| *z *= c.clone());
        assert_eq!(rhs.multiply_out(), expected);
        assert!(jb_formula_check(&p).unwrap().exact_zero);
    }

    #[test]
    fn jay_anticommutes_with_b_exactly() {
        for seed in 0..6 {
            let c = random_poly_chain(seed, 3, 2, 2, 2);
            let rep = bj_plus_jb(&c).unwrap();
            assert!(rep.exact_zero, "seed {seed}: {rep:?}");
        }
    }

    #[test]
    fn jb_formula_exact_on_degree_two() {
        for seed in 0..6 {
            let c = random_poly_chain(100 + seed, 2, 2, 2, 2);
            assert!(jb_formula_check(&c).unwrap().exact_zero, "seed {seed}");
        }
    }
}
