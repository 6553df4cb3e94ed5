use num_traits::{One, Zero};

use super::matrix::{Rational, RationalMatrix};

/// Reduced row echelon form and the pivot column indices.
///
/// The RREF of a matrix is unique, so the pivot set does not depend on which
/// nonzero entry is used to eliminate each column.
pub fn rref(m: &RationalMatrix) -> (RationalMatrix, Vec<usize>) {
    let mut r = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..r.cols() {
        if row == r.rows() {
            break;
        }
        let Some(p) = (row..r.rows()).find(|&i| !r[(i, col)].is_zero()) else {
            continue;
        };
        r.swap_rows(p, row);
        let inv = r[(row, col)].recip();
        r.scale_row(row, &inv);
        for i in 0..r.rows() {
            if i != row && !r[(i, col)].is_zero() {
                let f = r[(i, col)].clone();
                r.axpy_row(i, row, &f);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (r, pivots)
}

pub fn rank(m: &RationalMatrix) -> usize {
    rref(m).1.len()
}

/// Exact basis of `{x : Mx = 0}` read off the RREF: one vector per free
/// column, with a 1 in that column and 0 in every other free column.
/// Returned as `cols x 1` matrices, in increasing free-column order.
pub fn nullspace(m: &RationalMatrix) -> Vec<RationalMatrix> {
    nullspace_vectors(m)
        .into_iter()
        .map(|v| RationalMatrix::from_columns(&[v]).expect("non-empty vector"))
        .collect()
}

pub(crate) fn nullspace_vectors(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(m);
    let n = m.cols();
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); n];
        v[free] = Rational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -r[(row, free)].clone();
        }
        out.push(v);
    }
    out
}

/// Rank of the matrix whose columns are `vectors` (all of equal length).
pub(crate) fn column_rank(vectors: &[Vec<Rational>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    rank(&RationalMatrix::from_columns(vectors).expect("equal-length vectors"))
}

pub(crate) fn mat_vec(m: &RationalMatrix, v: &[Rational]) -> Vec<Rational> {
    (0..m.rows())
        .map(|i| m.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::matrix::rat;

    #[test]
    fn rank_one_rref() {
        let m = RationalMatrix::from_i64_rows(&[[1, 1], [1, 1]]);
        let (r, piv) = rref(&m);
        assert_eq!(r, RationalMatrix::from_i64_rows(&[[1, 1], [0, 0]]));
        assert_eq!(piv, vec![0]);
    }

    #[test]
    fn identity_is_its_own_rref() {
        let i3 = RationalMatrix::identity(3);
        let (r, piv) = rref(&i3);
        assert_eq!(r, i3);
        assert_eq!(piv, vec![0, 1, 2]);
    }

    #[test]
    fn nilpotent_example_has_rank_two() {
        // Row 3 is -(row 1); rows 1 and 2 are independent.
        let a = RationalMatrix::from_i64_rows(&[[4, -1, 2], [7, -2, 3], [-4, 1, -2]]);
        let (_, piv) = rref(&a);
        assert_eq!(piv.len(), 2);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 1);
        assert!((&a * &ns[0]).is_zero());
    }

    #[test]
    fn nullspace_cases() {
        let m = RationalMatrix::from_i64_rows(&[[1, 1], [1, 1]]);
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0].column(0), vec![rat(-1), rat(1)]);
        assert!(nullspace(&RationalMatrix::from_i64_rows(&[[2, 1], [1, 1]])).is_empty());
        assert_eq!(nullspace(&RationalMatrix::zeros(2, 3)).len(), 3);
    }
}
