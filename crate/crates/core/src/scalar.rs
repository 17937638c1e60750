//! Coefficient types.
//!
//! [`Gq`] is the exact Gaussian-rational field used by the symbolic engine.
//! [`Scalar`] abstracts over `Gq` and double-precision complex numbers so the
//! matrix-valued chain machinery can run either exactly or in floating point.

use std::collections::HashMap;
use std::fmt::Debug;
use std::num::NonZeroUsize;
use std::ops::{AddAssign, MulAssign, Neg, SubAssign};
use std::sync::{Mutex, OnceLock};

use gauss_quad::GaussLegendre;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact Gaussian rational `a + b i` with `a, b ∈ ℚ`.
pub type Gq = Complex<BigRational>;

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn gq_int(v: i64) -> Gq {
    Gq::new(rational(v, 1), BigRational::zero())
}

pub fn gq_ratio(num: i64, den: i64) -> Gq {
    Gq::new(rational(num, den), BigRational::zero())
}

pub fn gq_to_c64(z: &Gq) -> Complex64 {
    Complex64::new(
        z.re.to_f64().unwrap_or(f64::NAN),
        z.im.to_f64().unwrap_or(f64::NAN),
    )
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders a Gaussian rational. Real values print bare (`-3/2`), anything
/// else as `(re+imi)`.
pub fn fmt_gq(z: &Gq) -> String {
    if z.im.is_zero() {
        fmt_rational(&z.re)
    } else {
        let sign = if z.im.is_negative() { "-" } else { "+" };
        format!("({}{}{}i)", fmt_rational(&z.re), sign, fmt_rational(&z.im.abs()))
    }
}

/// Field of matrix entries for the chain and path machinery.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_gq(z: &Gq) -> Self;
    fn conj(&self) -> Self;
    fn to_c64(&self) -> Complex64;
    /// Nodes and weights on `[0, 1]` integrating every polynomial of degree
    /// `<= degree` exactly (up to the field's rounding).
    fn poly_rule(degree: usize) -> Vec<(Self, Self)>;
    fn mat_mul(a: &DMatrix<Self>, b: &DMatrix<Self>) -> DMatrix<Self>;
}

impl Scalar for Complex64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn from_gq(z: &Gq) -> Self {
        gq_to_c64(z)
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn poly_rule(degree: usize) -> Vec<(Self, Self)> {
        gauss_legendre_unit(degree / 2 + 1)
            .into_iter()
            .map(|(s, w)| (Complex64::new(s, 0.0), Complex64::new(w, 0.0)))
            .collect()
    }

    fn mat_mul(a: &DMatrix<Self>, b: &DMatrix<Self>) -> DMatrix<Self> {
        a * b
    }
}

impl Scalar for Gq {
    fn from_ratio(num: i64, den: i64) -> Self {
        gq_ratio(num, den)
    }

    fn from_gq(z: &Gq) -> Self {
        z.clone()
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn to_c64(&self) -> Complex64 {
        gq_to_c64(self)
    }

    fn poly_rule(degree: usize) -> Vec<(Self, Self)> {
        type Rules = HashMap<usize, Vec<(BigRational, BigRational)>>;
        static CACHE: OnceLock<Mutex<Rules>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let rule = {
            let mut guard = cache.lock().expect("rule cache poisoned");
            guard
                .entry(degree)
                .or_insert_with(|| newton_cotes_exact(degree))
                .clone()
        };
        rule.into_iter()
            .map(|(s, w)| (Gq::new(s, BigRational::zero()), Gq::new(w, BigRational::zero())))
            .collect()
    }

    fn mat_mul(a: &DMatrix<Self>, b: &DMatrix<Self>) -> DMatrix<Self> {
        assert_eq!(a.ncols(), b.nrows(), "matrix product shape");
        let mut out = DMatrix::from_element(a.nrows(), b.ncols(), Gq::zero());
        for i in 0..a.nrows() {
            for l in 0..a.ncols() {
                let ail = &a[(i, l)];
                if ail.is_zero() {
                    continue;
                }
                for j in 0..b.ncols() {
                    let blj = &b[(l, j)];
                    if !blj.is_zero() {
                        out[(i, j)] += ail * blj;
                    }
                }
            }
        }
        out
    }
}

/// Gauss–Legendre nodes and weights mapped to `[0, 1]`.
pub fn gauss_legendre_unit(points: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(points.max(1)).expect("nonzero"));
    rule.as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect()
}

/// Closed Newton–Cotes rule on `[0, 1]` with `degree + 1` equispaced nodes,
/// weights obtained by solving the moment equations exactly.
fn newton_cotes_exact(degree: usize) -> Vec<(BigRational, BigRational)> {
    let m = degree.max(1);
    let nodes: Vec<BigRational> = (0..=m).map(|j| rational(j as i64, m as i64)).collect();
    // Rows: Σ_j w_j s_j^p = 1/(p+1), p = 0..=m.
    let size = m + 1;
    let mut a: Vec<Vec<BigRational>> = (0..size)
        .map(|p| {
            let mut row: Vec<BigRational> = nodes.iter().map(|s| pow_rat(s, p)).collect();
            row.push(rational(1, p as i64 + 1));
            row
        })
        .collect();
    for col in 0..size {
        let pivot = (col..size).find(|&r| !a[r][col].is_zero()).expect("Vandermonde is regular");
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for entry in a[col].iter_mut() {
            *entry = &*entry * &inv;
        }
        for r in 0..size {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..=size {
                    let delta = &factor * &a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    nodes.into_iter().zip(a.into_iter().map(|row| row[size].clone())).collect()
}

fn pow_rat(base: &BigRational, exp: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc = &acc * base;
    }
    acc
}

/// Entrywise conjugate transpose, valid for any [`Scalar`].
pub fn adjoint<S: Scalar>(m: &DMatrix<S>) -> DMatrix<S> {
    m.transpose().map(|z| z.conj())
}

/// Frobenius norm of an arbitrary [`Scalar`] matrix, evaluated in `f64`.
pub fn frobenius<S: Scalar>(m: &DMatrix<S>) -> f64 {
    m.iter().map(|z| z.to_c64().norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_rule_integrates_monomials() {
        for degree in [1usize, 4, 9] {
            let rule = Gq::poly_rule(degree);
            for p in 0..=degree {
                let mut acc = Gq::zero();
                for (s, w) in &rule {
                    let mut sp = Gq::one();
                    for _ in 0..p {
                        sp = &sp * s;
                    }
                    acc += w.clone() * sp;
                }
                assert_eq!(acc, gq_ratio(1, p as i64 + 1), "degree {degree}, power {p}");
            }
        }
    }

    #[test]
    fn gauss_rule_integrates_monomials() {
        let rule = Complex64::poly_rule(11);
        for p in 0..=11 {
            let v: f64 = rule.iter().map(|(s, w)| w.re * s.re.powi(p)).sum();
            assert!((v - 1.0 / (p as f64 + 1.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn formatting() {
        assert_eq!(fmt_gq(&gq_ratio(-3, 2)), "-3/2");
        assert_eq!(fmt_gq(&Gq::new(rational(1, 1), rational(-2, 3))), "(1-2/3i)");
    }
}
