//! Leg-level expansions of the cyclic operators, shared by symbolic chains
//! (legs are words) and matrix chains (legs are matrices or matrix paths).
//!
//! Every function returns a list of `(sign, legs)` pairs; callers attach
//! their own coefficients and canonicalize as they see fit.

use nalgebra::DMatrix;

use crate::freealg::Word;
use crate::scalar::Scalar;

/// A tensor leg: anything with an associative product and a unit.
pub trait Leg: Clone {
    fn leg_mul(&self, other: &Self) -> Self;
    fn unit_like(&self) -> Self;
}

impl Leg for Word {
    fn leg_mul(&self, other: &Self) -> Self {
        self.concat(other)
    }

    fn unit_like(&self) -> Self {
        Word::unit()
    }
}

impl<S: Scalar> Leg for DMatrix<S> {
    fn leg_mul(&self, other: &Self) -> Self {
        S::mat_mul(self, other)
    }

    fn unit_like(&self) -> Self {
        let n = self.nrows();
        DMatrix::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }
}

pub fn matmul<S: Scalar>(a: &DMatrix<S>, b: &DMatrix<S>) -> DMatrix<S> {
    S::mat_mul(a, b)
}

fn parity(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Hochschild boundary of one elementary tensor `x₀⊗…⊗x_k`.
pub fn faces<L: Leg>(legs: &[L]) -> Vec<(i64, Vec<L>)> {
    let k = legs.len().saturating_sub(1);
    if k == 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(k + 1);
    for i in 0..k {
        let mut t = Vec::with_capacity(k);
        t.extend_from_slice(&legs[..i]);
        t.push(legs[i].leg_mul(&legs[i + 1]));
        t.extend_from_slice(&legs[i + 2..]);
        out.push((parity(i), t));
    }
    let mut last = Vec::with_capacity(k);
    last.push(legs[k].leg_mul(&legs[0]));
    last.extend_from_slice(&legs[1..k]);
    out.push((parity(k), last));
    out
}

/// `t(x₀⊗…⊗x_k) = (−1)^k x_k⊗x₀⊗…⊗x_{k−1}`.
pub fn rotate<L: Leg>(legs: &[L]) -> (i64, Vec<L>) {
    let k = legs.len() - 1;
    let mut t = Vec::with_capacity(legs.len());
    t.push(legs[k].clone());
    t.extend_from_slice(&legs[..k]);
    (parity(k), t)
}

/// All `t^i x` for `i = 0..=k`, each with its accumulated sign.
pub fn rotations<L: Leg>(legs: &[L]) -> Vec<(i64, Vec<L>)> {
    let mut out = Vec::with_capacity(legs.len());
    let mut cur = (1i64, legs.to_vec());
    for _ in 0..legs.len() {
        let next = rotate(&cur.1);
        out.push(cur.clone());
        cur = (cur.0 * next.0, next.1);
    }
    out
}

/// `B = (1 − t) s N` on one elementary tensor of degree `k`.
pub fn connes_terms<L: Leg>(legs: &[L]) -> Vec<(i64, Vec<L>)> {
    let k = legs.len() - 1;
    let unit = legs[0].unit_like();
    let mut out = Vec::with_capacity(2 * legs.len());
    for (sign, rot) in rotations(legs) {
        let mut a = Vec::with_capacity(k + 2);
        a.push(unit.clone());
        a.extend_from_slice(&rot);
        out.push((sign, a));
        // t(1⊗z₀⊗…⊗z_k) = (−1)^{k+1} z_k⊗1⊗z₀⊗…⊗z_{k−1}
        let mut b = Vec::with_capacity(k + 2);
        b.push(rot[k].clone());
        b.push(unit.clone());
        b.extend_from_slice(&rot[..k]);
        out.push((-sign * parity(k + 1), b));
    }
    out
}

/// Linear combination of elementary tensors of matrices. No canonical form
/// is kept; compare chains through [`MatChain::flatten`].
#[derive(Clone, Debug)]
pub struct MatChain<S: Scalar> {
    pub degree: usize,
    pub dim: usize,
    pub terms: Vec<(S, Vec<DMatrix<S>>)>,
}

impl<S: Scalar> MatChain<S> {
    pub fn new(degree: usize, dim: usize) -> Self {
        MatChain { degree, dim, terms: Vec::new() }
    }

    pub fn push(&mut self, c: S, legs: Vec<DMatrix<S>>) {
        assert_eq!(legs.len(), self.degree + 1, "arity mismatch");
        self.terms.push((c, legs));
    }

    pub fn extend(&mut self, other: &MatChain<S>, c: &S) {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        for (a, legs) in &other.terms {
            let mut s = a.clone();
            s *= c.clone();
            self.terms.push((s, legs.clone()));
        }
    }

    fn apply(&self, degree: usize, op: impl Fn(&[DMatrix<S>]) -> Vec<(i64, Vec<DMatrix<S>>)>) -> Self {
        let mut out = MatChain::new(degree, self.dim);
        for (c, legs) in &self.terms {
            for (sign, t) in op(legs) {
                let coeff = if sign < 0 { -c.clone() } else { c.clone() };
                out.terms.push((coeff, t));
            }
        }
        out
    }

    /// Degree 0 maps to the empty chain in degree 0 (the zero of `C_{−1}`).
    pub fn hochschild_b(&self) -> Self {
        self.apply(self.degree.saturating_sub(1), faces)
    }

    pub fn cyclic_t(&self) -> Self {
        self.apply(self.degree, |l| vec![rotate(l)])
    }

    pub fn connes_b(&self) -> Self {
        self.apply(self.degree + 1, connes_terms)
    }

    /// The product map `x₀⊗…⊗x_k ↦ x₀⋯x_k` summed over terms.
    pub fn multiply_out(&self) -> DMatrix<S> {
        let mut acc = DMatrix::from_element(self.dim, self.dim, S::zero());
        for (c, legs) in &self.terms {
            let mut p = legs[0].clone();
            for l in &legs[1..] {
                p = S::mat_mul(&p, l);
            }
            for (a, b) in acc.iter_mut().zip(p.iter()) {
                let mut t = b.clone();
                t *= c.clone();
                *a += t;
            }
        }
        acc
    }

    /// Dense coordinates in `(ℂ^{d×d})^{⊗(k+1)}`, row-major over legs.
    pub fn flatten(&self) -> Vec<S> {
        let d2 = self.dim * self.dim;
        let size = d2.pow(self.degree as u32 + 1);
        let mut out = vec![S::zero(); size];
        for (c, legs) in &self.terms {
            let mut block = vec![c.clone()];
            for leg in legs {
                let mut next = Vec::with_capacity(block.len() * d2);
                for a in &block {
                    for i in 0..self.dim {
                        for j in 0..self.dim {
                            let mut t = a.clone();
                            t *= leg[(i, j)].clone();
                            next.push(t);
                        }
                    }
                }
                block = next;
            }
            for (o, b) in out.iter_mut().zip(block) {
                *o += b;
            }
        }
        out
    }

    /// Euclidean norm of the flattened coordinates.
    pub fn coordinate_norm(&self) -> f64 {
        self.flatten().iter().map(|z| z.to_c64().norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.flatten().iter().all(|z| z.is_zero())
    }
}
