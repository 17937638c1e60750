//! The free unital algebra `ℂ⟨x, y⟩` over Gaussian rationals.
//!
//! Polynomials are stored as a sorted map from [`Word`] to nonzero
//! coefficient, so two polynomials are equal iff their maps are equal.

mod text;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use thiserror::Error;

use crate::scalar::{gq_int, gq_to_c64, Gq, Scalar};

pub use text::parse_poly;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FreeAlgError {
    #[error("omega_n requires n >= 1")]
    ZeroDegree,
    #[error("evaluation images must be square of equal size, got {0}x{1} and {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("cannot parse polynomial at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'x',
            Letter::Y => 'y',
        }
    }
}

/// A monomial. The empty word is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.0.len() + other.0.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Number of `x` minus number of `y`; the shift a word applies to a
    /// weighted-shift basis vector.
    pub fn balance(&self) -> i64 {
        self.0
            .iter()
            .map(|l| if *l == Letter::X { 1 } else { -1 })
            .sum()
    }
}

// Degree first, then lexicographic with x < y.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FreePoly {
    terms: BTreeMap<Word, Gq>,
}

impl FreePoly {
    pub fn zero() -> Self {
        FreePoly::default()
    }

    pub fn one() -> Self {
        Self::monomial(gq_int(1), Word::unit())
    }

    pub fn constant(c: Gq) -> Self {
        Self::monomial(c, Word::unit())
    }

    pub fn x() -> Self {
        Self::monomial(gq_int(1), Word::letter(Letter::X))
    }

    pub fn y() -> Self {
        Self::monomial(gq_int(1), Word::letter(Letter::Y))
    }

    /// `v = 1 - xy`
    pub fn v() -> Self {
        &Self::one() - &(&Self::x() * &Self::y())
    }

    /// `w = 1 - yx`
    pub fn w() -> Self {
        &Self::one() - &(&Self::y() * &Self::x())
    }

    pub fn monomial(c: Gq, word: Word) -> Self {
        let mut p = FreePoly::zero();
        p.add_term(word, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Gq)>) -> Self {
        let mut p = FreePoly::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, word: Word, c: Gq) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Gq)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::len)
    }

    pub fn coeff(&self, word: &Word) -> Gq {
        self.terms.get(word).cloned().unwrap_or_else(Gq::zero)
    }

    pub fn scale(&self, c: &Gq) -> Self {
        if c.is_zero() {
            return FreePoly::zero();
        }
        FreePoly {
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = FreePoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Σ_{k<n} v^k x
    pub fn omega(n: u32) -> Result<Self, FreeAlgError> {
        if n == 0 {
            return Err(FreeAlgError::ZeroDegree);
        }
        let v = Self::v();
        let x = Self::x();
        let mut acc = FreePoly::zero();
        let mut vk = FreePoly::one();
        for _ in 0..n {
            acc = &acc + &(&vk * &x);
            vk = &vk * &v;
        }
        Ok(acc)
    }

    /// `yω − (1 − wⁿ)`, `ωy − (1 − vⁿ)` and `vω − ωw`, labelled. All three
    /// vanish.
    pub fn omega_identities(n: u32) -> Result<[(&'static str, FreePoly); 3], FreeAlgError> {
        let om = Self::omega(n)?;
        let one = Self::one();
        Ok([
            ("y*omega = 1 - w^n", &(&Self::y() * &om) - &(&one - &Self::w().pow(n))),
            ("omega*y = 1 - v^n", &(&om * &Self::y()) - &(&one - &Self::v().pow(n))),
            ("v*omega = omega*w", &(&Self::v() * &om) - &(&om * &Self::w())),
        ])
    }

    /// Image under the homomorphism `x ↦ ev.x`, `y ↦ ev.y`.
    pub fn evaluate(&self, ev: &Evaluation) -> DMatrix<Complex64> {
        self.evaluate_in(&ev.x, &ev.y)
    }

    /// Image in any unital algebra given the images of both generators.
    pub fn evaluate_in<A: UnitalAlgebra>(&self, x: &A, y: &A) -> A {
        let mut memo: BTreeMap<&[Letter], A> = BTreeMap::new();
        let mut acc = x.zero_like();
        for (word, c) in &self.terms {
            let value = word_image(&word.0, x, y, &mut memo);
            acc = acc.add(&value.scale(c));
        }
        acc
    }

    /// Diagonal matrix entry `⟨e_k, π(p) e_k⟩` for the weighted shift
    /// `T e_j = weight(j) e_{j+1}` with `x ↦ T`, `y ↦ T*`.
    pub fn shift_diagonal(&self, k: usize, weight: &impl Fn(usize) -> f64) -> Complex64 {
        let mut total = Complex64::zero();
        for (word, c) in &self.terms {
            if word.balance() != 0 {
                continue;
            }
            let mut idx = k;
            let mut amp = 1.0;
            for l in word.0.iter().rev() {
                match l {
                    Letter::X => {
                        amp *= weight(idx);
                        idx += 1;
                    }
                    Letter::Y => {
                        if idx == 0 {
                            amp = 0.0;
                            break;
                        }
                        idx -= 1;
                        amp *= weight(idx);
                    }
                }
            }
            total += gq_to_c64(c) * amp;
        }
        total
    }
}

fn word_image<'a, A: UnitalAlgebra>(
    letters: &'a [Letter],
    x: &A,
    y: &A,
    memo: &mut BTreeMap<&'a [Letter], A>,
) -> A {
    if letters.is_empty() {
        return x.one_like();
    }
    if let Some(v) = memo.get(letters) {
        return v.clone();
    }
    let (head, rest) = letters.split_at(letters.len() - 1);
    let last = if rest[0] == Letter::X { x } else { y };
    let value = word_image(head, x, y, memo).mul(last);
    memo.insert(letters, value.clone());
    value
}

impl fmt::Display for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format_poly(self))
    }
}

impl Add for &FreePoly {
    type Output = FreePoly;
    fn add(self, rhs: &FreePoly) -> FreePoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &FreePoly {
    type Output = FreePoly;
    fn sub(self, rhs: &FreePoly) -> FreePoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &FreePoly {
    type Output = FreePoly;
    fn mul(self, rhs: &FreePoly) -> FreePoly {
        let mut out = FreePoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.concat(b), ca * cb);
            }
        }
        out
    }
}

impl Neg for &FreePoly {
    type Output = FreePoly;
    fn neg(self) -> FreePoly {
        FreePoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for FreePoly {
            type Output = FreePoly;
            fn $m(self, rhs: FreePoly) -> FreePoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FreePoly {
    type Output = FreePoly;
    fn neg(self) -> FreePoly {
        -&self
    }
}

/// Target of a polynomial evaluation.
pub trait UnitalAlgebra: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Gq) -> Self;
}

impl<S: Scalar> UnitalAlgebra for DMatrix<S> {
    fn zero_like(&self) -> Self {
        DMatrix::from_element(self.nrows(), self.ncols(), S::zero())
    }

    fn one_like(&self) -> Self {
        let n = self.nrows();
        DMatrix::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.iter_mut().zip(other.iter()) {
            *a += b.clone();
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        crate::tensor::matmul(self, other)
    }

    fn scale(&self, c: &Gq) -> Self {
        let s = S::from_gq(c);
        self.map(|mut z| {
            z *= s.clone();
            z
        })
    }
}

/// Images of the two generators.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub x: DMatrix<Complex64>,
    pub y: DMatrix<Complex64>,
}

impl Evaluation {
    pub fn new(x: DMatrix<Complex64>, y: DMatrix<Complex64>) -> Result<Self, FreeAlgError> {
        if !x.is_square() || x.shape() != y.shape() {
            return Err(FreeAlgError::DimensionMismatch(
                x.nrows(),
                x.ncols(),
                y.nrows(),
                y.ncols(),
            ));
        }
        Ok(Evaluation { x, y })
    }

    /// `x ↦ T`, `y ↦ T*`.
    pub fn adjoint_pair(t: &DMatrix<Complex64>) -> Result<Self, FreeAlgError> {
        Self::new(t.clone(), t.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.x.nrows()
    }
}
