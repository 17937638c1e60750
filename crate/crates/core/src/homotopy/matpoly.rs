//! Matrix-valued polynomials `t ↦ Σ c_k t^k` with exact calculus.

use nalgebra::DMatrix;

use crate::freealg::UnitalAlgebra;
use crate::scalar::{adjoint, Gq, Scalar};
use crate::tensor::Leg;

#[derive(Clone, Debug, PartialEq)]
pub struct MatPoly<S: Scalar> {
    dim: usize,
    coeffs: Vec<DMatrix<S>>,
}

fn zeros<S: Scalar>(d: usize) -> DMatrix<S> {
    DMatrix::from_element(d, d, S::zero())
}

fn add_into<S: Scalar>(acc: &mut DMatrix<S>, m: &DMatrix<S>) {
    for (a, b) in acc.iter_mut().zip(m.iter()) {
        *a += b.clone();
    }
}

fn scaled<S: Scalar>(m: &DMatrix<S>, c: &S) -> DMatrix<S> {
    m.map(|mut z| {
        z *= c.clone();
        z
    })
}

impl<S: Scalar> MatPoly<S> {
    pub fn zero(dim: usize) -> Self {
        MatPoly { dim, coeffs: Vec::new() }
    }

    pub fn from_coeffs(dim: usize, coeffs: Vec<DMatrix<S>>) -> Self {
        assert!(coeffs.iter().all(|c| c.shape() == (dim, dim)), "coefficient shape");
        let mut p = MatPoly { dim, coeffs };
        p.trim();
        p
    }

    pub fn constant(m: DMatrix<S>) -> Self {
        let d = m.nrows();
        Self::from_coeffs(d, vec![m])
    }

    pub fn identity(dim: usize) -> Self {
        Self::constant(DMatrix::from_fn(dim, dim, |i, j| if i == j { S::one() } else { S::zero() }))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.iter().all(|z| z.is_zero())) {
            self.coeffs.pop();
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[DMatrix<S>] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, t: &S) -> DMatrix<S> {
        let mut acc = zeros(self.dim);
        for c in self.coeffs.iter().rev() {
            acc = scaled(&acc, t);
            add_into(&mut acc, c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| scaled(c, &S::from_ratio(k as i64, 1)))
            .collect();
        MatPoly::from_coeffs(self.dim, coeffs)
    }

    /// Pointwise adjoint for real `t`.
    pub fn adjoint(&self) -> Self {
        MatPoly { dim: self.dim, coeffs: self.coeffs.iter().map(adjoint).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| {
                let mut c = self.coeffs.get(k).cloned().unwrap_or_else(|| zeros(self.dim));
                if let Some(o) = other.coeffs.get(k) {
                    add_into(&mut c, o);
                }
                c
            })
            .collect();
        MatPoly::from_coeffs(self.dim, coeffs)
    }

    pub fn scale(&self, c: &S) -> Self {
        MatPoly::from_coeffs(self.dim, self.coeffs.iter().map(|m| scaled(m, c)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return MatPoly::zero(self.dim);
        }
        let mut coeffs = vec![zeros(self.dim); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                add_into(&mut coeffs[i + j], &S::mat_mul(a, b));
            }
        }
        MatPoly::from_coeffs(self.dim, coeffs)
    }
}

impl<S: Scalar> UnitalAlgebra for MatPoly<S> {
    fn zero_like(&self) -> Self {
        MatPoly::zero(self.dim)
    }

    fn one_like(&self) -> Self {
        MatPoly::identity(self.dim)
    }

    fn add(&self, other: &Self) -> Self {
        MatPoly::add(self, other)
    }

    fn mul(&self, other: &Self) -> Self {
        MatPoly::mul(self, other)
    }

    fn scale(&self, c: &Gq) -> Self {
        MatPoly::scale(self, &S::from_gq(c))
    }
}

impl<S: Scalar> Leg for MatPoly<S> {
    fn leg_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn unit_like(&self) -> Self {
        MatPoly::identity(self.dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gq_int;

    fn m(vals: [i64; 4]) -> DMatrix<Gq> {
        DMatrix::from_row_slice(2, 2, &vals.map(gq_int))
    }

    #[test]
    fn product_rule_holds_exactly() {
        let p = MatPoly::from_coeffs(2, vec![m([1, 2, 0, 1]), m([0, 1, 1, 0]), m([3, 0, 0, -1])]);
        let q = MatPoly::from_coeffs(2, vec![m([2, 0, 1, 1]), m([1, -1, 0, 2])]);
        let lhs = p.mul(&q).derivative();
        let rhs = p.derivative().mul(&q).add(&p.mul(&q.derivative()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn eval_and_degree() {
        let p = MatPoly::from_coeffs(2, vec![m([1, 0, 0, 1]), m([2, 0, 0, 2]), m([0, 0, 0, 0])]);
        assert_eq!(p.degree(), 1);
        assert_eq!(p.eval(&gq_int(3)), m([7, 0, 0, 7]));
        assert!(MatPoly::constant(m([1, 1, 1, 1])).derivative().is_zero());
    }
}
