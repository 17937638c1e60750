//! Resolvent identities along the linear family `D_t = D + tA`.
//!
//! With `μ = √λ`: `P_t = (iμ + D_t)^{−1}`, `X_t = A P_t`,
//! `R_t = (λ + D_t²)^{−1}`.

use serde::Serialize;

use super::{check_square, identity, matrix_power, DenseOp, NumopError, Residual};
use num_complex::Complex64;

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[derive(Clone, Debug)]
pub struct ResolventFamily {
    d: DenseOp,
    a: DenseOp,
    lambda: f64,
}

#[derive(Clone, Debug)]
pub struct ResolventAt {
    pub p: DenseOp,
    pub x: DenseOp,
    pub r: DenseOp,
}

impl ResolventFamily {
    pub fn new(d: &DenseOp, a: &DenseOp, lambda: f64) -> Result<Self, NumopError> {
        check_square(d)?;
        if a.shape() != d.shape() {
            return Err(NumopError::Shape(format!("D is {:?}, A is {:?}", d.shape(), a.shape())));
        }
        if !(lambda > 0.0) {
            return Err(NumopError::InvalidParameter(format!("lambda {lambda} must be positive")));
        }
        Ok(ResolventFamily { d: d.clone(), a: a.clone(), lambda })
    }

    pub fn d_at(&self, t: f64) -> DenseOp {
        &self.d + &self.a * real(t)
    }

    pub fn at(&self, t: f64) -> Result<ResolventAt, NumopError> {
        let n = self.d.nrows();
        let dt = self.d_at(t);
        let shifted = &dt + identity(n) * Complex64::new(0.0, self.lambda.sqrt());
        let p = shifted.try_inverse().ok_or(NumopError::Singular("i√λ + D_t"))?;
        let x = &self.a * &p;
        let r = (identity(n) * real(self.lambda) + &dt * &dt)
            .try_inverse()
            .ok_or(NumopError::Singular("λ + D_t²"))?;
        Ok(ResolventAt { p, x, r })
    }
}

/// Evaluates the four resolvent identities between `t` and `s`. Each
/// residual is a Frobenius norm compared with `tol`.
pub fn resolvent_suite(
    d: &DenseOp,
    a: &DenseOp,
    t: f64,
    s: f64,
    lambda: f64,
    tol: f64,
) -> Result<Vec<Residual>, NumopError> {
    let fam = ResolventFamily::new(d, a, lambda)?;
    let n = d.nrows();
    let rt = fam.at(t)?;
    let rs = fam.at(s)?;
    let st = real(s - t);
    let one = identity(n);

    let p_id = (&rt.p - &rs.p) - &rt.p * &rs.x * st;
    let x_id = (&rt.x - &rs.x) - &rt.x * &rs.x * st;
    let r_id = (&rt.r - &rs.r) - (&rt.r * &rs.x + rt.x.adjoint() * &rs.r) * st;
    let ts = real(t - s);
    let left = (&one + rs.x.adjoint() * ts).try_inverse().ok_or(NumopError::Singular("1 + (t−s)X_s*"))?;
    let right = (&one + &rs.x * ts).try_inverse().ok_or(NumopError::Singular("1 + (t−s)X_s"))?;
    let conj_id = &rt.r - left * &rs.r * right;

    Ok(vec![
        Residual::below("resolvent:P_t-P_s", p_id.norm(), tol),
        Residual::below("resolvent:X_t-X_s", x_id.norm(), tol),
        Residual::below("resolvent:R_t-R_s", r_id.norm(), tol),
        Residual::below("resolvent:R_t-conjugated", conj_id.norm(), tol),
    ])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivativeCheck {
    pub name: String,
    /// `‖FD_h − analytic‖` at `h` and `h/2`.
    pub error_h: f64,
    pub error_half: f64,
    /// `error_h / error_half`; close to 4 for a second-order scheme. `None`
    /// when both errors are at rounding level (nothing to compare).
    pub ratio: Option<f64>,
}

impl DerivativeCheck {
    pub fn ratio_in(&self, lo: f64, hi: f64) -> bool {
        match self.ratio {
            Some(r) => (lo..=hi).contains(&r),
            None => true,
        }
    }
}

/// Analytic derivatives at `t0`:
/// `X' = −X²`, `R' = −RX − X*R`, `(R^n)' = −Σ_j R^j (RX + X*R) R^{n−1−j}`.
pub fn analytic_derivatives(fam: &ResolventFamily, t0: f64, n: u32) -> Result<[DenseOp; 3], NumopError> {
    let at = fam.at(t0)?;
    let dx = -(&at.x * &at.x);
    let core = &at.r * &at.x + at.x.adjoint() * &at.r;
    let dr = -core.clone();
    let mut drn = DenseOp::zeros(at.r.nrows(), at.r.ncols());
    for j in 0..n {
        drn -= matrix_power(&at.r, j) * &core * matrix_power(&at.r, n - 1 - j);
    }
    Ok([dx, dr, drn])
}

fn central_difference(fam: &ResolventFamily, t0: f64, n: u32, h: f64) -> Result<[DenseOp; 3], NumopError> {
    let plus = fam.at(t0 + h)?;
    let minus = fam.at(t0 - h)?;
    let inv = real(1.0 / (2.0 * h));
    Ok([
        (&plus.x - &minus.x) * inv,
        (&plus.r - &minus.r) * inv,
        (matrix_power(&plus.r, n) - matrix_power(&minus.r, n)) * inv,
    ])
}

/// Compares the analytic derivatives with central differences at steps `h`
/// and `h/2`. Errors below `floor` on both steps count as exact agreement.
pub fn derivative_suite(
    d: &DenseOp,
    a: &DenseOp,
    lambda: f64,
    n: u32,
    t0: f64,
    h: f64,
) -> Result<Vec<DerivativeCheck>, NumopError> {
    if n == 0 || !(h > 0.0) {
        return Err(NumopError::InvalidParameter("need n >= 1 and h > 0".into()));
    }
    let fam = ResolventFamily::new(d, a, lambda)?;
    let exact = analytic_derivatives(&fam, t0, n)?;
    let fd_h = central_difference(&fam, t0, n, h)?;
    let fd_half = central_difference(&fam, t0, n, h / 2.0)?;
    let names = ["dX/dt", "dR/dt", "dR^n/dt"];
    let floor = 1e3 * f64::EPSILON / h;
    Ok((0..3)
        .map(|i| {
            let e1 = (&fd_h[i] - &exact[i]).norm();
            let e2 = (&fd_half[i] - &exact[i]).norm();
            let ratio = if e1 < floor && e2 < floor { None } else { Some(e1 / e2) };
            DerivativeCheck { name: names[i].to_string(), error_h: e1, error_half: e2, ratio }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_hermitian, rng};

    #[test]
    fn trivial_cases_vanish_exactly() {
        let mut r = rng(4);
        let d = random_hermitian(&mut r, 5, 2.0);
        let a = random_hermitian(&mut r, 5, 1.0);
        for res in resolvent_suite(&d, &a, 0.3, 0.3, 1.0, 1e-300).unwrap() {
            assert_eq!(res.value, 0.0, "{res:?}");
        }
        let zero = DenseOp::zeros(5, 5);
        for res in resolvent_suite(&d, &zero, 0.0, 1.0, 2.0, 1e-300).unwrap() {
            assert_eq!(res.value, 0.0, "{res:?}");
        }
    }

    #[test]
    fn random_identities_hold() {
        let mut r = rng(40);
        for _ in 0..5 {
            let d = random_hermitian(&mut r, 6, 2.0);
            let a = random_hermitian(&mut r, 6, 1.0);
            let rs = resolvent_suite(&d, &a, 0.0, 1.0, 1.0, 1e-10).unwrap();
            assert!(rs.iter().all(|x| x.pass), "{rs:?}");
        }
    }

    #[test]
    fn scalar_derivative() {
        let d = DenseOp::zeros(1, 1);
        let a = DenseOp::identity(1, 1);
        let fam = ResolventFamily::new(&d, &a, 1.0).unwrap();
        let [_, dr, _] = analytic_derivatives(&fam, 0.0, 1).unwrap();
        assert!(dr[(0, 0)].norm() < 1e-15);
        // R_t = 1/(1+t²), R'(t) = −2t/(1+t²)².
        let [_, dr, _] = analytic_derivatives(&fam, 0.5, 1).unwrap();
        assert!((dr[(0, 0)].re + 1.0 / 1.5625).abs() < 1e-14);
    }

    #[test]
    fn zero_perturbation_has_zero_derivative() {
        let mut r = rng(2);
        let d = random_hermitian(&mut r, 4, 1.0);
        let checks = derivative_suite(&d, &DenseOp::zeros(4, 4), 1.0, 2, 0.0, 1e-3).unwrap();
        for c in checks {
            assert_eq!(c.error_h, 0.0);
            assert!(c.ratio.is_none());
        }
    }

    #[test]
    fn richardson_order() {
        let mut r = rng(6);
        let d = random_hermitian(&mut r, 6, 2.0);
        let a = random_hermitian(&mut r, 6, 1.0);
        for c in derivative_suite(&d, &a, 1.0, 3, 0.0, 1e-4).unwrap() {
            assert!(c.ratio_in(3.5, 4.5), "{c:?}");
        }
    }
}
