use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};

use super::DiracError;

pub type ExactEntry = Complex<i64>;

/// Largest supported half-dimension.
pub const MAX_CLIFFORD_N: u32 = 4;

/// Irreducible representation of the Clifford algebra on `2n − 1`
/// generators by Hermitian `2^{n−1} × 2^{n−1}` matrices with entries in
/// `{0, ±1, ±i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordRep {
    pub n: u32,
    pub matrices: Vec<DMatrix<ExactEntry>>,
}

fn c(re: i64, im: i64) -> ExactEntry {
    Complex::new(re, im)
}

fn pauli() -> [DMatrix<ExactEntry>; 3] {
    [
        DMatrix::from_row_slice(2, 2, &[c(0, 0), c(1, 0), c(1, 0), c(0, 0)]),
        DMatrix::from_row_slice(2, 2, &[c(0, 0), c(0, -1), c(0, 1), c(0, 0)]),
        DMatrix::from_row_slice(2, 2, &[c(1, 0), c(0, 0), c(0, 0), c(-1, 0)]),
    ]
}

fn eye(d: usize) -> DMatrix<ExactEntry> {
    DMatrix::from_fn(d, d, |i, j| if i == j { c(1, 0) } else { c(0, 0) })
}

/// `n = 1`: the scalar 1. Each step maps `c_j ↦ σ₁⊗c_j` and appends
/// `σ₂⊗I`, `σ₃⊗I`.
pub fn clifford_build(n: u32) -> Result<CliffordRep, DiracError> {
    if n == 0 || n > MAX_CLIFFORD_N {
        return Err(DiracError::CliffordSize(n));
    }
    let mut mats = vec![eye(1)];
    for _ in 1..n {
        let [s1, s2, s3] = pauli();
        let d = mats[0].nrows();
        let mut next: Vec<_> = mats.iter().map(|m| s1.kronecker(m)).collect();
        next.push(s2.kronecker(&eye(d)));
        next.push(s3.kronecker(&eye(d)));
        mats = next;
    }
    Ok(CliffordRep { n, matrices: mats })
}

impl CliffordRep {
    pub fn dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    /// Every generator is Hermitian and `c_j c_k + c_k c_j = 2δ_{jk}`,
    /// compared entry by entry in exact integer arithmetic.
    pub fn relations_hold(&self) -> bool {
        let d = self.dim();
        let hermitian = self.matrices.iter().all(|m| m.map(|z| z.conj()).transpose() == *m);
        let anti = self.matrices.iter().enumerate().all(|(j, a)| {
            self.matrices.iter().enumerate().all(|(k, b)| {
                let s = a * b + b * a;
                let want = if j == k { eye(d) * c(2, 0) } else { DMatrix::from_element(d, d, c(0, 0)) };
                s == want
            })
        });
        hermitian && anti
    }

    pub fn dense(&self) -> Vec<DMatrix<Complex64>> {
        self.matrices.iter().map(|m| m.map(|z| Complex64::new(z.re as f64, z.im as f64))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_cases() {
        let one = clifford_build(1).unwrap();
        assert_eq!(one.matrices, vec![eye(1)]);
        let two = clifford_build(2).unwrap();
        assert_eq!(two.matrices, pauli().to_vec());
    }

    #[test]
    fn relations_exact_up_to_four() {
        for n in 1..=4 {
            let rep = clifford_build(n).unwrap();
            assert_eq!(rep.matrices.len(), 2 * n as usize - 1);
            assert_eq!(rep.dim(), 1 << (n - 1));
            assert!(rep.relations_hold(), "n = {n}");
        }
    }

    #[test]
    fn guard() {
        assert!(clifford_build(0).is_err());
        assert!(clifford_build(5).is_err());
    }
}
