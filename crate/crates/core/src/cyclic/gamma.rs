//! The degree-2 relative cycle `γ = (γ₂, γ₀)` attached to `v = 1 − xy`,
//! `w = 1 − yx`, and `ω_n`.

use crate::freealg::FreePoly;
use crate::scalar::{gq_int, Gq};

use super::{Chain, CyclicError, IdealGenerator, RelWitness};

#[derive(Clone, Debug)]
pub struct Gamma {
    pub n: u32,
    pub gamma2: Chain,
    pub gamma0: Chain,
    pub witness2: RelWitness,
    pub witness0: RelWitness,
}

/// The five displayed tensors of `γ₂` before expansion, as
/// `(coefficient, legs)`. `third_sign` is the sign of `ω⊗w^n⊗y`.
fn tensors(n: u32, third_sign: i64) -> Result<Vec<(Gq, Vec<FreePoly>)>, CyclicError> {
    let om = FreePoly::omega(n).map_err(|_| CyclicError::ZeroDegree)?;
    let (vn, wn) = (FreePoly::v().pow(n), FreePoly::w().pow(n));
    let (y, one) = (FreePoly::y(), FreePoly::one());
    Ok(vec![
        (gq_int(-1), vec![wn.clone(), y.clone(), om.clone()]),
        (gq_int(1), vec![vn.clone(), om.clone(), y.clone()]),
        (gq_int(third_sign), vec![om.clone(), wn.clone(), y.clone()]),
        (gq_int(1), vec![om, y, vn.clone()]),
        (gq_int(-2), vec![&wn - &vn, one.clone(), one]),
    ])
}

/// Unexpanded tensors of `γ₂` (with the validated sign).
pub fn gamma2_tensors(n: u32) -> Result<Vec<(Gq, Vec<FreePoly>)>, CyclicError> {
    tensors(n, -1)
}

fn build(n: u32, third_sign: i64) -> Result<Gamma, CyclicError> {
    if n == 0 {
        return Err(CyclicError::ZeroDegree);
    }
    let ts = tensors(n, third_sign)?;
    let mut gamma2 = Chain::zero(2);
    for (c, legs) in &ts {
        gamma2.add_tensor(c, legs);
    }

    // The last tensor's ideal leg is w^n − v^n; split it so each witness
    // leg is a single generator of I_n.
    let mut witness2 = RelWitness::new(n, 2);
    let gens = [
        (0, IdealGenerator::WPow),
        (0, IdealGenerator::VPow),
        (1, IdealGenerator::WPow),
        (2, IdealGenerator::VPow),
    ];
    for ((c, legs), (pos, g)) in ts.iter().take(4).zip(gens) {
        witness2.push_generator_leg(c.clone(), legs.clone(), pos, g);
    }
    let (one, wn, vn) = (FreePoly::one(), IdealGenerator::WPow.element(n), IdealGenerator::VPow.element(n));
    witness2.push_generator_leg(gq_int(-2), vec![wn, one.clone(), one.clone()], 0, IdealGenerator::WPow);
    witness2.push_generator_leg(gq_int(2), vec![vn, one.clone(), one], 0, IdealGenerator::VPow);

    let g0 = IdealGenerator::WnMinusVn.element(n);
    let gamma0 = Chain::from_poly(&g0);
    let mut witness0 = RelWitness::new(n, 0);
    witness0.push_generator_leg(gq_int(1), vec![g0], 0, IdealGenerator::WnMinusVn);

    Ok(Gamma { n, gamma2, gamma0, witness2, witness0 })
}

/// `γ(n)` with the sign of the third tensor for which `b(γ₂) + B(γ₀) = 0`.
pub fn gamma(n: u32) -> Result<Gamma, CyclicError> {
    build(n, -1)
}

/// The variant printed with `+ ω⊗w^n⊗y`. It is not a cycle; kept so the
/// defect stays under test.
pub fn gamma_plus_variant(n: u32) -> Result<Gamma, CyclicError> {
    build(n, 1)
}

#[derive(Clone, Debug)]
pub struct CycleCheck {
    pub is_cycle: bool,
    pub residual: Chain,
}

/// `b(g2) + B(g0)`, which vanishes iff `(g2, g0)` is a cycle.
pub fn cycle_check(g2: &Chain, g0: &Chain) -> Result<CycleCheck, CyclicError> {
    if g2.degree() != 2 {
        return Err(CyclicError::Degree { expected: 2, got: g2.degree() });
    }
    if g0.degree() != 0 {
        return Err(CyclicError::Degree { expected: 0, got: g0.degree() });
    }
    let residual = g2.hochschild_b().add(&g0.connes_b());
    Ok(CycleCheck { is_cycle: residual.is_zero(), residual })
}
