//! Double-precision complex linear algebra: SVD-based pseudoinverses,
//! eigenvalues, numerical Jordan decomposition and the complex-symmetric form.

mod eigen;
mod jordan;
mod matrix;
mod svd;
mod symmetric;

pub use eigen::eigenvalues;
pub use jordan::{numeric_jordan_matrix, numerical_jordan, JordanOptions, NumericJordanForm};
pub use matrix::{ComplexMatrix, EPS};
pub use svd::{
    condition_number, mp_inverse, mp_inverse_fixed_rank, mp_inverse_with, norm2, numeric_rank, svd,
    RankMode, SvdFactors, Threshold,
};
pub use symmetric::{complex_symmetric_form, SymmetricForm};

#[allow(unused_imports)]
pub(crate) use matrix::c;
