//! Property tests for the structural invariants of each module.

use nalgebra::DMatrix;
use proptest::prelude::*;

use homindex::cyclic::random::{random_poly, seeded_chain, ChainShape};
use homindex::cyclic::{gamma, Chain};
use homindex::dirac::{clifford_build, dirac_assemble, LatticeSpec, PotentialSpec};
use homindex::exec::{map_indexed, Strategy};
use homindex::freealg::{Evaluation, FreePoly};
use homindex::homotopy::{bj_plus_jb, index_along_path, random_poly_chain, transgression_exact, MatPoly, ShiftFamily};
use homindex::numop::shift::{hind_shift, ShiftOp, WeightRule};
use homindex::numop::transform::bounded_transform;
use homindex::numop::{hind_dense, schatten_norm, trace_norm};
use homindex::sample::{random_matrix, rng};
use homindex::scalar::{gq_int, Gq};

fn poly(seed: u64) -> FreePoly {
    random_poly(&mut rng(seed), 4, 3, 3)
}

fn shape(degree: usize) -> ChainShape {
    ChainShape { degree, terms: 3, max_word_len: 3, max_coeff: 3 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn free_algebra_is_associative_and_distributive(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (p, q, r) = (poly(a), poly(b), poly(c));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
    }

    #[test]
    fn evaluation_is_multiplicative(a in any::<u64>(), b in any::<u64>(), s in any::<u64>()) {
        let mut g = rng(s);
        let ev = Evaluation::new(random_matrix(&mut g, 4, 0.7), random_matrix(&mut g, 4, 0.7)).unwrap();
        let (p, q) = (poly(a), poly(b));
        let gap = ((&p * &q).evaluate(&ev) - p.evaluate(&ev) * q.evaluate(&ev)).norm();
        let scale = 1.0 + p.evaluate(&ev).norm() * q.evaluate(&ev).norm();
        prop_assert!(gap < 1e-12 * scale, "gap {gap}");
    }

    #[test]
    fn connes_complex_axioms(seed in any::<u64>(), degree in 0usize..=4) {
        let c = seeded_chain(seed, shape(degree));
        prop_assert!(c.hochschild_b().hochschild_b().is_zero());
        prop_assert!(c.connes_b().connes_b().is_zero());
        prop_assert!(c.anticommutator_b_big_b().is_zero());
    }

    #[test]
    fn nonzero_degree_zero_chains_are_not_cyclically_trivial(seed in any::<u64>()) {
        let c = seeded_chain(seed, shape(0));
        prop_assume!(!c.is_zero());
        prop_assert!(!c.is_cyclically_trivial());
    }

    #[test]
    fn finite_dimensional_index_vanishes(seed in any::<u64>(), dim in 1usize..=24, n in 1u32..=4) {
        let t = random_matrix(&mut rng(seed), dim, 0.6);
        let h = hind_dense(&t, n).unwrap();
        prop_assert!(h.abs() < 1e-10 * dim as f64, "hind {h}");
    }

    #[test]
    fn bounded_transform_residuals(seed in any::<u64>(), dim in 1usize..=16) {
        let d = random_matrix(&mut rng(seed), dim, 2.0);
        let bt = bounded_transform(&d).unwrap();
        prop_assert!(bt.residuals.iter().all(|r| r.pass), "{:?}", bt.residuals);
    }

    #[test]
    fn holder_inequality(seed in any::<u64>(), dim in 2usize..=8, p in 1.1f64..6.0) {
        let mut g = rng(seed);
        let (a, b) = (random_matrix(&mut g, dim, 1.0), random_matrix(&mut g, dim, 1.0));
        let q = p / (p - 1.0);
        let lhs = trace_norm(&(&a * &b));
        let rhs = schatten_norm(&a, p).unwrap().value * schatten_norm(&b, q).unwrap().value;
        prop_assert!(lhs <= rhs * (1.0 + 1e-9), "{lhs} > {rhs}");
    }

    #[test]
    fn shift_index_telescopes(scale in 0.05f64..1.0, alpha in 1.0f64..2.0, q in 0.05f64..0.9, n in 1u32..=3) {
        // Σ_k [δ_k^n − δ_{k−1}^n] − 1 collapses to lim δ_K^n − 1 = −1.
        let tol = 1e-6;
        for rule in [WeightRule::InversePoly { scale, alpha }, WeightRule::Geometric { q }] {
            let ix = hind_shift(&ShiftOp::new(rule).unwrap(), n, tol).unwrap();
            prop_assert!((ix.value + 1.0).abs() <= ix.bound + tol, "{rule:?}: {}", ix.value);
        }
    }

    #[test]
    fn sequential_and_parallel_agree(seed in any::<u64>()) {
        let f = |i: usize| hind_dense(&random_matrix(&mut rng(seed ^ i as u64), 6, 0.5), 2).unwrap().to_bits();
        prop_assert_eq!(map_indexed(Strategy::Sequential, 8, f), map_indexed(Strategy::Parallel, 8, f));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn bj_plus_jb_vanishes_on_polynomial_paths(
        seed in any::<u64>(), degree in 2usize..=3, dim in 1usize..=3, path_degree in 0usize..=3,
    ) {
        let c = random_poly_chain(seed, degree, dim, path_degree, 2);
        let r = bj_plus_jb(&c).unwrap();
        prop_assert!(r.exact_zero, "defect {}", r.defect);
    }

    #[test]
    fn exact_transgression_on_gaussian_rational_paths(entries in proptest::collection::vec(-3i64..=3, 8), n in 1u32..=2) {
        let m = |k: usize| DMatrix::from_fn(2, 2, |i, j| gq_int(entries[4 * k + 2 * i + j]));
        let path: MatPoly<Gq> = MatPoly::from_coeffs(2, vec![m(0), m(1)]);
        let gap = transgression_exact(&path, n).unwrap();
        prop_assert!(gap.iter().all(|z| *z == gq_int(0)));
    }

    #[test]
    fn dirac_pair_is_adjoint(half in 2usize..=5, amp in 0.0f64..2.0, width in 0.5f64..2.0) {
        let spec = LatticeSpec { n: 1, points: 2 * half, half_width: 2.0 };
        let pot = PotentialSpec::Gaussian { amplitude: amp, width, internal: 2 }.build().unwrap();
        let pair = dirac_assemble(&spec, &pot).unwrap();
        prop_assert!(pair.adjoint_defect <= 1e-12);
        prop_assert!(hind_dense(&pair.plus, 1).unwrap().abs() < 1e-9 * pair.plus.nrows() as f64);
    }
}

#[test]
fn relative_witnesses_survive_both_boundaries() {
    for n in 1..=4 {
        let g = gamma(n).unwrap();
        for w in [g.witness2.hochschild_b(), g.witness2.connes_b()] {
            assert!(w.verify(), "n = {n}");
        }
        assert!(g.witness2.hochschild_b().chain().sub(&g.gamma2.hochschild_b()).is_zero());
        assert!(g.witness2.connes_b().chain().sub(&g.gamma2.connes_b()).is_zero());
    }
}

#[test]
fn cycle_relation_for_n_up_to_six() {
    for n in 1..=6 {
        let g = gamma(n).unwrap();
        assert!(g.gamma2.hochschild_b().add(&g.gamma0.connes_b()).is_zero(), "n = {n}");
    }
}

#[test]
fn clifford_relations_up_to_four() {
    for n in 1..=4 {
        assert!(clifford_build(n).unwrap().relations_hold());
    }
}

#[test]
fn four_dimensional_lattice_index_vanishes() {
    let spec = LatticeSpec { n: 2, points: 4, half_width: 2.0 };
    let pot = PotentialSpec::InversePoly { amplitude: 0.7, k: 2.0, internal: 1 }.build().unwrap();
    let pair = dirac_assemble(&spec, &pot).unwrap();
    assert!(pair.adjoint_defect <= 1e-12);
    assert!(hind_dense(&pair.plus, 2).unwrap().abs() < 1e-9 * pair.plus.nrows() as f64);
}

#[test]
fn zero_potential_normality() {
    for (n, points) in [(1, 8), (2, 4)] {
        let spec = LatticeSpec { n, points, half_width: 3.0 };
        let pair = dirac_assemble(&spec, &PotentialSpec::Zero { internal: 1 }.build().unwrap()).unwrap();
        let comm = (&pair.plus * &pair.minus - &pair.minus * &pair.plus).norm();
        assert!(comm < 1e-12, "n = {n}: {comm}");
    }
}

#[test]
fn smooth_family_index_is_constant() {
    let grid: Vec<f64> = (0..11).map(|i| i as f64 / 10.0).collect();
    let tol = 1e-6;
    let rep = index_along_path(&ShiftFamily::SmoothInverse, 2, &grid, tol, Strategy::Parallel).unwrap();
    assert!(rep.constant && rep.spread < 2.0 * tol);
    assert!(rep.slices.iter().all(|s| (s.value + 1.0).abs() <= s.bound + tol));
}

#[test]
fn degree_zero_chain_from_poly() {
    let c = Chain::from_poly(&FreePoly::x());
    assert_eq!(c.degree(), 0);
    assert!(!c.is_cyclically_trivial());
}
