//! Membership certificates for relative chains.
//!
//! Ideal membership is never decided. A [`RelWitness`] lists unexpanded
//! tensors, each with one leg factored as `left · g · right` for a
//! generator `g`. Applying `b` or `B` to a witness pushes the factorization
//! through the leg products, so the image carries a witness too.

use std::fmt;

use crate::freealg::FreePoly;
use crate::scalar::{gq_int, Gq};
use crate::tensor::{connes_terms, faces, Leg};

use super::Chain;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealGenerator {
    /// `v^n`, in `I_n`
    VPow,
    /// `w^n`, in `I_n`
    WPow,
    /// `w^n − v^n`, generating `J_n`
    WnMinusVn,
}

impl IdealGenerator {
    pub fn element(self, n: u32) -> FreePoly {
        match self {
            IdealGenerator::VPow => FreePoly::v().pow(n),
            IdealGenerator::WPow => FreePoly::w().pow(n),
            IdealGenerator::WnMinusVn => &FreePoly::w().pow(n) - &FreePoly::v().pow(n),
        }
    }
}

impl fmt::Display for IdealGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdealGenerator::VPow => "v^n",
            IdealGenerator::WPow => "w^n",
            IdealGenerator::WnMinusVn => "w^n-v^n",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessTerm {
    pub coeff: Gq,
    pub legs: Vec<FreePoly>,
    pub ideal_leg: usize,
    pub left: FreePoly,
    pub generator: IdealGenerator,
    pub right: FreePoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelWitness {
    pub n: u32,
    pub degree: usize,
    pub terms: Vec<WitnessTerm>,
}

/// A leg that remembers a factorization through the ideal, if it has one.
#[derive(Clone)]
struct Tracked {
    value: FreePoly,
    factor: Option<(FreePoly, IdealGenerator, FreePoly)>,
}

impl Leg for Tracked {
    fn leg_mul(&self, other: &Self) -> Self {
        let factor = match (&self.factor, &other.factor) {
            (Some((l, g, r)), _) => Some((l.clone(), *g, r * &other.value)),
            (None, Some((l, g, r))) => Some((&self.value * l, *g, r.clone())),
            (None, None) => None,
        };
        Tracked { value: &self.value * &other.value, factor }
    }

    fn unit_like(&self) -> Self {
        Tracked { value: FreePoly::one(), factor: None }
    }
}

impl RelWitness {
    pub fn new(n: u32, degree: usize) -> Self {
        RelWitness { n, degree, terms: Vec::new() }
    }

    /// Adds `coeff · legs` with `legs[ideal_leg] = generator` (trivial
    /// outer factors).
    pub fn push_generator_leg(&mut self, coeff: Gq, legs: Vec<FreePoly>, ideal_leg: usize, generator: IdealGenerator) {
        self.terms.push(WitnessTerm {
            coeff,
            legs,
            ideal_leg,
            left: FreePoly::one(),
            generator,
            right: FreePoly::one(),
        });
    }

    /// Every factored leg reconstructs to its stored leg, and arities match.
    pub fn verify(&self) -> bool {
        self.terms.iter().all(|t| {
            t.legs.len() == self.degree + 1
                && t.ideal_leg < t.legs.len()
                && &(&t.left * &t.generator.element(self.n)) * &t.right == t.legs[t.ideal_leg]
        })
    }

    /// The expanded chain this witness certifies.
    pub fn chain(&self) -> Chain {
        let mut c = Chain::zero(self.degree);
        for t in &self.terms {
            c.add_tensor(&t.coeff, &t.legs);
        }
        c
    }

    pub fn generators(&self) -> impl Iterator<Item = IdealGenerator> + '_ {
        self.terms.iter().map(|t| t.generator)
    }

    fn propagate(&self, degree: usize, op: impl Fn(&[Tracked]) -> Vec<(i64, Vec<Tracked>)>) -> RelWitness {
        let mut out = RelWitness::new(self.n, degree);
        for t in &self.terms {
            let tracked: Vec<Tracked> = t
                .legs
                .iter()
                .enumerate()
                .map(|(i, leg)| Tracked {
                    value: leg.clone(),
                    factor: (i == t.ideal_leg).then(|| (t.left.clone(), t.generator, t.right.clone())),
                })
                .collect();
            for (sign, legs) in op(&tracked) {
                let pos = legs.iter().position(|l| l.factor.is_some()).expect("factor survives products");
                let (left, generator, right) = legs[pos].factor.clone().expect("checked");
                out.terms.push(WitnessTerm {
                    coeff: if sign < 0 { -t.coeff.clone() } else { t.coeff.clone() },
                    legs: legs.into_iter().map(|l| l.value).collect(),
                    ideal_leg: pos,
                    left,
                    generator,
                    right,
                });
            }
        }
        out
    }

    /// Witness for `b` of the certified chain. In degree 0 the image is zero
    /// and the returned witness is empty.
    pub fn hochschild_b(&self) -> RelWitness {
        if self.degree == 0 {
            return RelWitness::new(self.n, 0);
        }
        self.propagate(self.degree - 1, faces)
    }

    pub fn connes_b(&self) -> RelWitness {
        self.propagate(self.degree + 1, connes_terms)
    }

    pub fn scale(&self, c: &Gq) -> RelWitness {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff = &t.coeff * c;
        }
        out
    }

    pub fn negate(&self) -> RelWitness {
        self.scale(&gq_int(-1))
    }
}
