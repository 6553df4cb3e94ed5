use super::elim::rref;
use super::matrix::RationalMatrix;

/// Exact Moore-Penrose inverse through a full-rank factorization `M = F·G`.
///
/// `F` holds the pivot columns of `M` and `G` the nonzero rows of its RREF, so
/// `M⁺ = Gᵀ(GGᵀ)⁻¹(FᵀF)⁻¹Fᵀ`. Over the rationals the conjugate transpose is
/// the plain transpose.
pub fn exact_mp_inverse(m: &RationalMatrix) -> RationalMatrix {
    let (r, pivots) = rref(m);
    if pivots.is_empty() {
        return RationalMatrix::zeros(m.cols(), m.rows());
    }
    let rows: Vec<usize> = (0..pivots.len()).collect();
    let f = m.select_columns(&pivots);
    let g = r.select_rows(&rows);
    let ft = f.transpose();
    let gt = g.transpose();
    let ggt_inv = (&g * &gt).inverse().expect("G has full row rank");
    let ftf_inv = (&ft * &f).inverse().expect("F has full column rank");
    &(&(&gt * &ggt_inv) * &ftf_inv) * &ft
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::matrix::rat;

    fn penrose_exact(m: &RationalMatrix, x: &RationalMatrix) -> bool {
        let mx = m * x;
        let xm = x * m;
        &mx * m == *m && &xm * x == *x && mx.transpose() == mx && xm.transpose() == xm
    }

    #[test]
    fn nilpotent_block_inverse_is_transpose() {
        let j = RationalMatrix::from_i64_rows(&[[0, 1, 0], [0, 0, 1], [0, 0, 0]]);
        let x = exact_mp_inverse(&j);
        assert_eq!(x, j.transpose());
        assert!(penrose_exact(&j, &x));
    }

    #[test]
    fn nonsingular_and_zero() {
        let m = RationalMatrix::from_i64_rows(&[[2, 1], [1, 1]]);
        assert_eq!(exact_mp_inverse(&m), m.inverse().unwrap());
        let z = RationalMatrix::zeros(2, 3);
        assert_eq!(exact_mp_inverse(&z), RationalMatrix::zeros(3, 2));
    }

    #[test]
    fn rectangular_rank_one() {
        let m = RationalMatrix::from_i64_rows(&[[1, 2, 3], [2, 4, 6]]);
        let x = exact_mp_inverse(&m);
        assert!(penrose_exact(&m, &x));
        // M⁺ = Mᵀ / ‖M‖_F² for rank one
        assert_eq!(x, m.transpose().scale(&(rat(1) / rat(70))));
    }
}
