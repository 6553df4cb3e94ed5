//! Exact rational linear algebra. Used as the oracle for every floating result:
//! it either answers exactly or refuses (`IrrationalSpectrum`), never approximates.

mod elim;
mod jordan;
mod matrix;
mod pinv;
mod poly;

pub use elim::{nullspace, rank, rref};
pub use jordan::{
    exact_jordan, jordan_matrix, zero_blocks_are_trivial, ExactJordanForm, JordanBlock,
};
pub use matrix::{format_rational, parse_rational, rat, ratio, Rational, RationalMatrix};
pub use pinv::exact_mp_inverse;
pub use poly::{charpoly, rational_roots, CharPoly};
