//! Chains `C_k(𝒜) = 𝒜^{⊗(k+1)}` over the free algebra and the cyclic
//! operators `b`, `t`, `N`, `s`, `B`.
//!
//! A [`Chain`] is kept fully expanded: a map from tuples of words to nonzero
//! coefficients. Equality of chains is therefore equality of maps.

mod gamma;
mod json;
pub mod random;
mod witness;

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::freealg::{FreePoly, Word};
use crate::scalar::{gq_int, Gq};
use crate::tensor::{connes_terms, faces, rotate, rotations, Leg};

pub use gamma::{cycle_check, gamma, gamma_plus_variant, gamma2_tensors, CycleCheck, Gamma};
pub use json::{ChainJson, TermJson};
pub use witness::{IdealGenerator, RelWitness, WitnessTerm};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CyclicError {
    #[error("gamma(n) requires n >= 1")]
    ZeroDegree,
    #[error("expected a chain of degree {expected}, got {got}")]
    Degree { expected: usize, got: usize },
    #[error("periodicity needs top degree >= 2, got {0}")]
    TopDegree(isize),
    #[error("components of a total chain must have degrees top, top-2, ...; component {index} has degree {got}")]
    Parity { index: usize, got: usize },
    #[error("malformed chain record: {0}")]
    Format(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    degree: usize,
    terms: BTreeMap<Vec<Word>, Gq>,
}

impl Chain {
    pub fn zero(degree: usize) -> Self {
        Chain { degree, terms: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Word>, &Gq)> {
        self.terms.iter()
    }

    /// Adds `c · w₀⊗…⊗w_k`.
    pub fn add_monomial(&mut self, words: Vec<Word>, c: Gq) {
        assert_eq!(words.len(), self.degree + 1, "arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(words) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Multilinear expansion of `c · p₀⊗…⊗p_k`.
    pub fn add_tensor(&mut self, c: &Gq, legs: &[FreePoly]) {
        assert_eq!(legs.len(), self.degree + 1, "arity mismatch");
        let mut partial: Vec<(Vec<Word>, Gq)> = vec![(Vec::with_capacity(legs.len()), c.clone())];
        for leg in legs {
            let mut next = Vec::with_capacity(partial.len() * leg.num_terms());
            for (words, a) in &partial {
                for (w, b) in leg.terms() {
                    let mut ws = words.clone();
                    ws.push(w.clone());
                    next.push((ws, a * b));
                }
            }
            partial = next;
        }
        for (words, a) in partial {
            self.add_monomial(words, a);
        }
    }

    pub fn from_tensor(c: &Gq, legs: &[FreePoly]) -> Self {
        let mut ch = Chain::zero(legs.len() - 1);
        ch.add_tensor(c, legs);
        ch
    }

    pub fn from_poly(p: &FreePoly) -> Self {
        Self::from_tensor(&gq_int(1), std::slice::from_ref(p))
    }

    /// The single leg of a degree-0 chain as a polynomial.
    pub fn as_poly(&self) -> Option<FreePoly> {
        (self.degree == 0).then(|| {
            FreePoly::from_terms(self.terms.iter().map(|(w, c)| (w[0].clone(), c.clone())))
        })
    }

    pub fn scale(&self, c: &Gq) -> Self {
        let mut out = Chain::zero(self.degree);
        for (w, a) in &self.terms {
            out.add_monomial(w.clone(), a * c);
        }
        out
    }

    pub fn add(&self, other: &Chain) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_monomial(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Chain) -> Self {
        self.add(&other.scale(&gq_int(-1)))
    }

    fn map_terms(&self, degree: usize, op: impl Fn(&[Word]) -> Vec<(i64, Vec<Word>)>) -> Chain {
        let mut out = Chain::zero(degree);
        for (w, c) in &self.terms {
            for (sign, t) in op(w) {
                out.add_monomial(t, if sign < 0 { -c.clone() } else { c.clone() });
            }
        }
        out
    }

    /// Hochschild boundary. Degree 0 maps to the zero chain (reported in
    /// degree 0, standing in for `C_{−1} = 0`).
    pub fn hochschild_b(&self) -> Chain {
        if self.degree == 0 {
            return Chain::zero(0);
        }
        self.map_terms(self.degree - 1, faces)
    }

    pub fn cyclic_t(&self) -> Chain {
        self.map_terms(self.degree, |w| vec![rotate(w)])
    }

    pub fn norm_n(&self) -> Chain {
        self.map_terms(self.degree, rotations)
    }

    pub fn degeneracy_s(&self) -> Chain {
        self.map_terms(self.degree + 1, |w| {
            let mut t = Vec::with_capacity(w.len() + 1);
            t.push(Word::unit());
            t.extend_from_slice(w);
            vec![(1, t)]
        })
    }

    pub fn connes_b(&self) -> Chain {
        self.map_terms(self.degree + 1, connes_terms)
    }

    /// `(bB + Bb)(c)`; in degree 0 only `bB` contributes.
    pub fn anticommutator_b_big_b(&self) -> Chain {
        let bb = self.connes_b().hochschild_b();
        if self.degree == 0 {
            bb
        } else {
            bb.add(&self.hochschild_b().connes_b())
        }
    }

    /// `(1 − t) c`
    pub fn one_minus_t(&self) -> Chain {
        self.sub(&self.cyclic_t())
    }

    /// True iff `N(c) = 0`, i.e. `c ∈ Im(1 − t)` over a field of
    /// characteristic zero.
    pub fn is_cyclically_trivial(&self) -> bool {
        self.norm_n().is_zero()
    }
}

impl Leg for FreePoly {
    fn leg_mul(&self, other: &Self) -> Self {
        self * other
    }

    fn unit_like(&self) -> Self {
        FreePoly::one()
    }
}

/// Element of the totalized bicomplex: components in degrees
/// `top, top−2, …` down to 0 or 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotChain {
    top_degree: isize,
    components: Vec<Chain>,
}

impl TotChain {
    /// Components listed from the top degree downward. A top degree of `n`
    /// needs exactly `n/2 + 1` components.
    pub fn new(top_degree: usize, components: Vec<Chain>) -> Result<Self, CyclicError> {
        if components.len() != top_degree / 2 + 1 {
            return Err(CyclicError::Format(format!(
                "top degree {top_degree} needs {} components, got {}",
                top_degree / 2 + 1,
                components.len()
            )));
        }
        for (i, c) in components.iter().enumerate() {
            if c.degree() != top_degree - 2 * i {
                return Err(CyclicError::Parity { index: i, got: c.degree() });
            }
        }
        Ok(TotChain { top_degree: top_degree as isize, components })
    }

    /// The zero element of `Tot_{−1}`.
    pub fn empty() -> Self {
        TotChain { top_degree: -1, components: Vec::new() }
    }

    pub fn top_degree(&self) -> isize {
        self.top_degree
    }

    pub fn components(&self) -> &[Chain] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Chain::is_zero)
    }

    /// Drops the top component.
    pub fn periodicity_s(&self) -> Result<TotChain, CyclicError> {
        if self.top_degree < 2 {
            return Err(CyclicError::TopDegree(self.top_degree));
        }
        Ok(TotChain {
            top_degree: self.top_degree - 2,
            components: self.components[1..].to_vec(),
        })
    }

    /// `(b + B)`: output component `j` is `b(ξ_j) + B(ξ_{j+1})`. The
    /// B-image of the top component has no slot in the truncated total
    /// degree and is not part of the output.
    pub fn tot_boundary(&self) -> TotChain {
        if self.top_degree <= 0 {
            return TotChain::empty();
        }
        let out_top = (self.top_degree - 1) as usize;
        let count = out_top / 2 + 1;
        let comps = (0..count)
            .map(|j| {
                let mut c = self.components[j].hochschild_b();
                if let Some(next) = self.components.get(j + 1) {
                    c = c.add(&next.connes_b());
                }
                c
            })
            .collect();
        TotChain { top_degree: out_top as isize, components: comps }
    }
}
