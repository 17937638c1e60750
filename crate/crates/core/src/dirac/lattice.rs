//! Generalized Dirac operators on a periodic lattice in `ℝ^{2n}`.
//!
//! The Hilbert space is `ℓ²(lattice) ⊗ ℂ^{2^{n−1}} ⊗ ℂ^k` in that tensor
//! order. Derivatives are periodic central differences, which are
//! anti-Hermitian, so `D⁻` is exactly the adjoint of `D⁺` up to rounding.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{clifford_build, dimension_budget, DiracError};
use crate::numop::{hermitian_defect, DenseOp};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    /// Half-dimension: the lattice lives in `ℝ^{2n}`.
    pub n: u32,
    /// Points per axis.
    pub points: usize,
    /// The box is `[−L, L)` on every axis.
    pub half_width: f64,
}

impl LatticeSpec {
    pub fn validate(&self) -> Result<(), DiracError> {
        if self.n == 0 {
            return Err(DiracError::Lattice("n must be at least 1".into()));
        }
        if self.points < 4 || !self.points.is_multiple_of(2) {
            return Err(DiracError::Lattice(format!("{} points per axis; need an even count >= 4", self.points)));
        }
        if !(self.half_width > 0.0) || !self.half_width.is_finite() {
            return Err(DiracError::Lattice(format!("half-width {} must be positive", self.half_width)));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    pub fn axes(&self) -> usize {
        2 * self.n as usize
    }

    pub fn sites(&self) -> usize {
        self.points.pow(self.axes() as u32)
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    /// Axis indices of a site; axis 0 varies slowest.
    fn site_index(&self, mut site: usize) -> Vec<usize> {
        let mut idx = vec![0; self.axes()];
        for a in (0..self.axes()).rev() {
            idx[a] = site % self.points;
            site /= self.points;
        }
        idx
    }

    fn neighbor(&self, site: usize, axis: usize, forward: bool) -> usize {
        let stride = self.points.pow((self.axes() - 1 - axis) as u32);
        let i = (site / stride) % self.points;
        let j = if forward { (i + 1) % self.points } else { (i + self.points - 1) % self.points };
        site - i * stride + j * stride
    }
}

/// Periodic central difference `(f_{i+1} − f_{i−1}) / 2h`.
pub fn central_difference(points: usize, h: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(points, points);
    for i in 0..points {
        m[(i, (i + 1) % points)] += 1.0 / (2.0 * h);
        m[(i, (i + points - 1) % points)] -= 1.0 / (2.0 * h);
    }
    m
}

/// Potential components `a_1, …, a_{2n}`, each a `k × k` matrix function.
#[derive(Clone)]
pub struct Potential {
    pub name: String,
    pub internal_dim: usize,
    rule: PotentialRule,
}

type PotentialRule = Arc<dyn Fn(usize, &[f64]) -> DenseOp + Send + Sync>;

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Potential").field("name", &self.name).field("internal_dim", &self.internal_dim).finish()
    }
}

impl Potential {
    /// `rule(j, x)` is `a_{j+1}(x)`.
    pub fn from_fn(
        name: impl Into<String>,
        internal_dim: usize,
        rule: impl Fn(usize, &[f64]) -> DenseOp + Send + Sync + 'static,
    ) -> Self {
        Potential { name: name.into(), internal_dim, rule: Arc::new(rule) }
    }

    pub fn zero(internal_dim: usize) -> Self {
        Potential::from_fn("zero", internal_dim, move |_, _| DenseOp::zeros(internal_dim, internal_dim))
    }

    pub fn component(&self, axis: usize, x: &[f64]) -> DenseOp {
        (self.rule)(axis, x)
    }

    pub fn is_zero_potential(&self) -> bool {
        self.name == "zero"
    }
}

/// Fixed Hermitian internal matrix attached to axis `j`.
fn internal_matrix(j: usize, k: usize) -> DenseOp {
    DenseOp::from_fn(k, k, |p, q| {
        if p == q {
            Complex64::new((p + j + 1) as f64 / k as f64, 0.0)
        } else {
            let z = Complex64::new(1.0 / (1 + p + q + j) as f64, 1.0 / (2 + j) as f64);
            if p < q {
                z
            } else {
                z.conj()
            }
        }
    })
}

/// Named potential families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "potential", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialSpec {
    Zero {
        #[serde(default = "one")]
        internal: usize,
    },
    /// `a_j(x) = amplitude · exp(−|x|²/width²) · H_j`
    Gaussian {
        amplitude: f64,
        width: f64,
        #[serde(default = "one")]
        internal: usize,
    },
    /// `a_j(x) = amplitude · (1 + |x|²)^{−k/2} · H_j`
    InversePoly {
        amplitude: f64,
        k: f64,
        #[serde(default = "one")]
        internal: usize,
    },
}

fn one() -> usize {
    1
}

impl PotentialSpec {
    pub fn registry_name(&self) -> &'static str {
        match self {
            PotentialSpec::Zero { .. } => "potential:zero",
            PotentialSpec::Gaussian { .. } => "potential:gaussian",
            PotentialSpec::InversePoly { .. } => "potential:inverse-poly",
        }
    }

    pub fn build(&self) -> Result<Potential, DiracError> {
        let r2 = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        match *self {
            PotentialSpec::Zero { internal } if internal >= 1 => Ok(Potential::zero(internal)),
            PotentialSpec::Gaussian { amplitude, width, internal } if internal >= 1 && width > 0.0 => {
                Ok(Potential::from_fn("gaussian", internal, move |j, x| {
                    internal_matrix(j, internal) * Complex64::new(amplitude * (-r2(x) / (width * width)).exp(), 0.0)
                }))
            }
            PotentialSpec::InversePoly { amplitude, k, internal } if internal >= 1 && k >= 0.0 => {
                Ok(Potential::from_fn("inverse-poly", internal, move |j, x| {
                    internal_matrix(j, internal) * Complex64::new(amplitude * (1.0 + r2(x)).powf(-k / 2.0), 0.0)
                }))
            }
            _ => Err(DiracError::Potential(format!("invalid parameters {self:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DiracPair {
    pub plus: DenseOp,
    pub minus: DenseOp,
    /// `‖D⁻ − (D⁺)*‖_max`
    pub adjoint_defect: f64,
}

pub fn total_dimension(spec: &LatticeSpec, internal_dim: usize) -> usize {
    spec.sites() * (1usize << (spec.n - 1)) * internal_dim
}

fn add_block(m: &mut DenseOp, row: usize, col: usize, block: &DenseOp) {
    let b = block.nrows();
    let mut view = m.view_mut((row * b, col * b), (b, b));
    view += block;
}

/// Assembles `D⁺ = ∂_{2n} + i a_{2n} + i Σ_{j<2n} c_j (∂_j + i a_j)` and
/// `D⁻ = −∂_{2n} − i a_{2n} + i Σ_{j<2n} c_j (∂_j + i a_j)` independently and
/// checks that they are adjoint.
pub fn dirac_assemble(spec: &LatticeSpec, pot: &Potential) -> Result<DiracPair, DiracError> {
    dirac_assemble_with_budget(spec, pot, dimension_budget())
}

pub fn dirac_assemble_with_budget(spec: &LatticeSpec, pot: &Potential, budget: usize) -> Result<DiracPair, DiracError> {
    spec.validate()?;
    if spec.n > super::clifford::MAX_CLIFFORD_N {
        return Err(DiracError::CliffordSize(spec.n));
    }
    let k = pot.internal_dim;
    let dim = total_dimension(spec, k);
    if dim > budget {
        return Err(DiracError::Budget { dim, budget });
    }
    let cliff = clifford_build(spec.n)?.dense();
    let s = cliff[0].nrows();
    let axes = spec.axes();
    let last = axes - 1;
    let ik = DenseOp::identity(k, k);
    let is = DenseOp::identity(s, s);
    let i = Complex64::new(0.0, 1.0);
    let step = Complex64::new(1.0 / (2.0 * spec.spacing()), 0.0);

    // Hopping blocks per axis: i c_j ⊗ I_k, and ±I for the last axis.
    let hop_common: Vec<DenseOp> = cliff.iter().map(|c| c.kronecker(&ik) * (i * step)).collect();
    let hop_last = is.kronecker(&ik) * step;

    let mut plus = DenseOp::zeros(dim, dim);
    let mut minus = DenseOp::zeros(dim, dim);
    for site in 0..spec.sites() {
        let x: Vec<f64> = spec.site_index(site).into_iter().map(|j| spec.coordinate(j)).collect();
        for axis in 0..axes {
            let fwd = spec.neighbor(site, axis, true);
            let bwd = spec.neighbor(site, axis, false);
            if axis == last {
                add_block(&mut plus, site, fwd, &hop_last);
                add_block(&mut plus, site, bwd, &-&hop_last);
                add_block(&mut minus, site, fwd, &-&hop_last);
                add_block(&mut minus, site, bwd, &hop_last);
            } else {
                for m in [&mut plus, &mut minus] {
                    add_block(m, site, fwd, &hop_common[axis]);
                    add_block(m, site, bwd, &-&hop_common[axis]);
                }
            }
        }
        if pot.is_zero_potential() {
            continue;
        }
        let mut common = DenseOp::zeros(s * k, s * k);
        for (axis, c) in cliff.iter().enumerate() {
            let a = pot.component(axis, &x);
            check_sample(&a, axis, &x, k)?;
            common -= c.kronecker(&a);
        }
        let a_last = pot.component(last, &x);
        check_sample(&a_last, last, &x, k)?;
        let grading = is.kronecker(&a_last) * i;
        add_block(&mut plus, site, site, &(&common + &grading));
        add_block(&mut minus, site, site, &(&common - &grading));
    }
    let adjoint_defect = (&minus - plus.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if adjoint_defect > 1e-12 {
        return Err(DiracError::Adjoint(adjoint_defect));
    }
    Ok(DiracPair { plus, minus, adjoint_defect })
}

fn check_sample(a: &DenseOp, axis: usize, x: &[f64], k: usize) -> Result<(), DiracError> {
    if a.shape() != (k, k) {
        return Err(DiracError::Potential(format!("a_{} has shape {:?}, expected {k}×{k}", axis + 1, a.shape())));
    }
    let defect = hermitian_defect(a);
    if defect > 1e-12 {
        return Err(DiracError::NonHermitianPotential { axis: axis + 1, point: x.to_vec(), defect });
    }
    Ok(())
}
