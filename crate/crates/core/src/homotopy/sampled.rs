use num_complex::Complex64;

use super::path::grid_derivative;
use super::HomotopyError;
use crate::freealg::UnitalAlgebra;
use crate::numop::{identity, DenseOp};
use crate::scalar::{gq_to_c64, Gq};
use crate::tensor::{faces, Leg, MatChain};

/// A path known only on the shared uniform grid of its chain.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledLeg(pub Vec<DenseOp>);

impl SampledLeg {
    fn zip(&self, other: &Self, f: impl Fn(&DenseOp, &DenseOp) -> DenseOp) -> Self {
        SampledLeg(self.0.iter().zip(&other.0).map(|(a, b)| f(a, b)).collect())
    }

    fn stride(&self, s: usize) -> Vec<DenseOp> {
        self.0.iter().step_by(s).cloned().collect()
    }
}

impl UnitalAlgebra for SampledLeg {
    fn zero_like(&self) -> Self {
        SampledLeg(self.0.iter().map(|m| DenseOp::zeros(m.nrows(), m.ncols())).collect())
    }

    fn one_like(&self) -> Self {
        SampledLeg(self.0.iter().map(|m| identity(m.nrows())).collect())
    }

    fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    fn mul(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a * b)
    }

    fn scale(&self, c: &Gq) -> Self {
        let z = gq_to_c64(c);
        SampledLeg(self.0.iter().map(|m| m * z).collect())
    }
}

impl Leg for SampledLeg {
    fn leg_mul(&self, other: &Self) -> Self {
        UnitalAlgebra::mul(self, other)
    }

    fn unit_like(&self) -> Self {
        self.one_like()
    }
}

/// Chain whose legs are sampled on one uniform grid of `[0, 1]`.
#[derive(Clone, Debug)]
pub struct SampledChain {
    pub degree: usize,
    pub dim: usize,
    pub points: usize,
    pub terms: Vec<(Complex64, Vec<SampledLeg>)>,
}

impl SampledChain {
    pub fn new(degree: usize, dim: usize, points: usize) -> Result<Self, HomotopyError> {
        if points < 5 {
            return Err(HomotopyError::TooCoarse(points));
        }
        if !(points - 1).is_multiple_of(2) {
            return Err(HomotopyError::Grid(format!("{} intervals; Simpson needs an even count", points - 1)));
        }
        Ok(SampledChain { degree, dim, points, terms: Vec::new() })
    }

    pub fn push(&mut self, c: Complex64, legs: Vec<SampledLeg>) -> Result<(), HomotopyError> {
        if legs.len() != self.degree + 1 {
            return Err(HomotopyError::Mismatch(format!("{} legs in a degree-{} chain", legs.len(), self.degree)));
        }
        if legs.iter().any(|l| l.0.len() != self.points || l.0.iter().any(|m| m.shape() != (self.dim, self.dim))) {
            return Err(HomotopyError::Mismatch("leg samples disagree with the chain grid".into()));
        }
        self.terms.push((c, legs));
        Ok(())
    }

    pub fn hochschild_b(&self) -> Self {
        let mut out = SampledChain { degree: self.degree.saturating_sub(1), terms: Vec::new(), ..*self };
        for (c, legs) in &self.terms {
            for (sign, t) in faces(legs) {
                out.terms.push((*c * sign as f64, t));
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct SampledJay {
    pub fine: MatChain<Complex64>,
    /// `J` recomputed on every second grid point when that grid still
    /// supports Simpson; otherwise the trapezoid rule on the full grid.
    pub coarse: MatChain<Complex64>,
    pub richardson: bool,
}

impl SampledJay {
    /// Coordinate norm of `fine − coarse`. Differences and quadrature are
    /// both at least second order, so this dominates the error of `fine`.
    pub fn error_estimate(&self) -> f64 {
        let mut d = self.fine.clone();
        d.extend(&self.coarse, &Complex64::new(-1.0, 0.0));
        d.coordinate_norm()
    }
}

fn simpson_weights(points: usize, h: f64) -> Vec<f64> {
    (0..points)
        .map(|i| {
            let w = if i == 0 || i == points - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * h / 3.0
        })
        .collect()
}

fn trapezoid_weights(points: usize, h: f64) -> Vec<f64> {
    (0..points).map(|i| if i == 0 || i == points - 1 { h / 2.0 } else { h }).collect()
}

fn jay_on(c: &SampledChain, stride: usize, simpson: bool) -> MatChain<Complex64> {
    let points = (c.points - 1) / stride + 1;
    let h = stride as f64 / (c.points - 1) as f64;
    let weights = if simpson { simpson_weights(points, h) } else { trapezoid_weights(points, h) };
    let mut out = MatChain::new(c.degree - 1, c.dim);
    for (coeff, legs) in &c.terms {
        let x0 = legs[0].stride(stride);
        let dx1 = grid_derivative(&legs[1].stride(stride), h);
        let rest: Vec<Vec<DenseOp>> = legs[2..].iter().map(|l| l.stride(stride)).collect();
        for (i, w) in weights.iter().enumerate() {
            let mut t = Vec::with_capacity(c.degree);
            t.push(&x0[i] * &dx1[i]);
            t.extend(rest.iter().map(|l| l[i].clone()));
            out.push(coeff * *w, t);
        }
    }
    out
}

/// `J` by composite Simpson with grid differences for `dx¹/dt`.
pub fn jay_sampled(c: &SampledChain) -> Result<SampledJay, HomotopyError> {
    if c.degree == 0 {
        return Err(HomotopyError::DegreeZero);
    }
    let fine = jay_on(c, 1, true);
    let intervals = c.points - 1;
    let richardson = intervals.is_multiple_of(4) && intervals >= 8;
    let coarse = if richardson { jay_on(c, 2, true) } else { jay_on(c, 1, false) };
    Ok(SampledJay { fine, coarse, richardson })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leg(points: usize, f: impl Fn(f64) -> f64) -> SampledLeg {
        SampledLeg((0..points).map(|i| identity(1) * Complex64::new(f(i as f64 / (points - 1) as f64), 0.0)).collect())
    }

    #[test]
    fn scalar_integral_converges() {
        // ∫₀¹ e^s · cos(s) ds with x⁰ = e^t, x¹ = sin t.
        let exact = 0.5 * (1f64.exp() * (1f64.sin() + 1f64.cos()) - 1.0);
        let mut errs = Vec::new();
        for points in [17, 33, 65] {
            let mut c = SampledChain::new(1, 1, points).unwrap();
            c.push(Complex64::new(1.0, 0.0), vec![leg(points, f64::exp), leg(points, f64::sin)]).unwrap();
            let j = jay_sampled(&c).unwrap();
            assert!(j.richardson);
            let err = (j.fine.multiply_out()[(0, 0)].re - exact).abs();
            assert!(err <= j.error_estimate(), "{err} vs {}", j.error_estimate());
            errs.push(err);
        }
        assert!(errs[0] / errs[1] > 3.0 && errs[1] / errs[2] > 3.0, "{errs:?}");
    }

    #[test]
    fn constant_legs_give_zero() {
        let mut c = SampledChain::new(1, 1, 9).unwrap();
        c.push(Complex64::new(2.0, 0.0), vec![leg(9, |_| 3.0), leg(9, |_| -1.0)]).unwrap();
        let j = jay_sampled(&c).unwrap();
        assert_eq!(j.fine.multiply_out()[(0, 0)], Complex64::new(0.0, 0.0));
        assert_eq!(j.error_estimate(), 0.0);
    }

    #[test]
    fn too_coarse_rejected() {
        assert!(matches!(SampledChain::new(1, 1, 3), Err(HomotopyError::TooCoarse(3))));
    }
}
