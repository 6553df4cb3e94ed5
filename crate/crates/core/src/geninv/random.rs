//! Seeded generators for test matrices. Every generator takes the RNG by
//! reference so a single seed reproduces a whole trial.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{jordan_matrix, rat, ExactJordanForm, JordanBlock, RationalMatrix};
use crate::float::ComplexMatrix;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer entries uniform in `[-bound, bound]`.
pub fn int_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> RationalMatrix {
    let data = (0..rows * cols)
        .map(|_| rat(rng.random_range(-bound..=bound)))
        .collect();
    RationalMatrix::new(rows, cols, data).expect("shape matches data")
}

/// Nonsingular integer matrix with entries in `[-bound, bound]`, by rejection.
pub fn nonsingular_int_matrix<R: Rng>(rng: &mut R, n: usize, bound: i64) -> RationalMatrix {
    loop {
        let m = int_matrix(rng, n, n, bound);
        if m.det().is_ok_and(|d| d != rat(0)) {
            return m;
        }
    }
}

/// A random partition of `n` into Jordan blocks with integer eigenvalues in
/// `[-eig_bound, eig_bound]`. Zero is drawn with extra weight so singular and
/// defective cases are common. `max_block` caps block sizes.
pub fn jordan_blocks<R: Rng>(
    rng: &mut R,
    n: usize,
    eig_bound: i64,
    max_block: usize,
) -> Vec<JordanBlock<crate::exact::Rational>> {
    let mut left = n;
    let mut blocks = Vec::new();
    while left > 0 {
        let size = rng.random_range(1..=left.min(max_block.max(1)));
        let ev = if rng.random_bool(0.35) {
            0
        } else {
            rng.random_range(-eig_bound..=eig_bound)
        };
        blocks.push(JordanBlock {
            eigenvalue: rat(ev),
            size,
        });
        left -= size;
    }
    blocks
}

/// `M = P·J·P⁻¹` from a random integer `P` and the given blocks, returned with
/// the decomposition it was built from.
pub fn with_spectrum<R: Rng>(
    rng: &mut R,
    blocks: Vec<JordanBlock<crate::exact::Rational>>,
    p_bound: i64,
) -> (RationalMatrix, ExactJordanForm) {
    let n = blocks.iter().map(|b| b.size).sum();
    let p = nonsingular_int_matrix(rng, n, p_bound);
    let j = jordan_matrix(&blocks);
    let m = &(&p * &j) * &p.inverse().expect("nonsingular by construction");
    let jf = ExactJordanForm::from_parts(&m, p, blocks).expect("consistent by construction");
    (m, jf)
}

pub fn rational_spectrum_matrix<R: Rng>(
    rng: &mut R,
    n: usize,
    max_block: usize,
) -> (RationalMatrix, ExactJordanForm) {
    let blocks = jordan_blocks(rng, n, 3, max_block);
    with_spectrum(rng, blocks, 3)
}

/// Integer matrix of exactly rank `r` (as a product of `n×r` and `r×n` factors).
pub fn rank_deficient<R: Rng>(rng: &mut R, n: usize, r: usize, bound: i64) -> RationalMatrix {
    loop {
        let m = &int_matrix(rng, n, r, bound) * &int_matrix(rng, r, n, bound);
        if crate::exact::rank(&m) == r {
            return m;
        }
    }
}

/// Complex matrix with real and imaginary parts uniform in `[-1, 1]`.
pub fn complex_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
        .collect();
    ComplexMatrix::new(rows, cols, data).expect("finite")
}

/// Unitary factor of the QR decomposition of a random complex matrix.
pub fn unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    loop {
        let a = complex_matrix(rng, n, n);
        let q = a.to_nalgebra().qr().q();
        let u = ComplexMatrix::from_nalgebra(&q);
        if u.rows() == n {
            return u;
        }
    }
}

/// Positive diagonal with log-uniform entries in `[1/spread, spread]`.
pub fn positive_diagonal<R: Rng>(rng: &mut R, n: usize, spread: f64) -> ComplexMatrix {
    let ls = spread.ln();
    let d: Vec<f64> = (0..n).map(|_| rng.random_range(-ls..=ls).exp()).collect();
    ComplexMatrix::diag_real(&d)
}
