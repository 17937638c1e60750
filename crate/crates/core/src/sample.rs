//! Seeded random matrices. Every generator draws from a caller-owned
//! `ChaCha8Rng`, so a seed fixes the whole instance.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn entry<R: Rng>(r: &mut R) -> Complex64 {
    Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
}

/// Entries uniform in the unit square, scaled by `scale / √d` so the
/// operator norm stays O(scale) as `d` grows.
pub fn random_matrix<R: Rng>(r: &mut R, d: usize, scale: f64) -> DMatrix<Complex64> {
    let s = scale / (d.max(1) as f64).sqrt();
    DMatrix::from_fn(d, d, |_, _| entry(r) * s)
}

pub fn random_hermitian<R: Rng>(r: &mut R, d: usize, scale: f64) -> DMatrix<Complex64> {
    let a = random_matrix(r, d, scale);
    (&a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Unitary factor of a random matrix.
pub fn random_unitary<R: Rng>(r: &mut R, d: usize) -> DMatrix<Complex64> {
    let a = random_matrix(r, d, 1.0);
    a.qr().q()
}
