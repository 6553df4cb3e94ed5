use num_traits::{One, Zero};

use super::elim::{column_rank, mat_vec, nullspace_vectors, rank};
use super::matrix::{Rational, RationalMatrix};
use super::poly::{charpoly, rational_roots};
use crate::error::{Error, Result};

/// One Jordan block `λI + N` of the given size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanBlock<T> {
    pub eigenvalue: T,
    pub size: usize,
}

/// `M = P·J·P⁻¹` with `J` assembled from `blocks` in order.
///
/// Blocks are sorted by eigenvalue ascending, then by size descending. Column
/// groups of `P` follow the same order; within a block the columns are the
/// chain `[(M−λI)^{s−1}v, …, (M−λI)v, v]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactJordanForm {
    pub p: RationalMatrix,
    pub blocks: Vec<JordanBlock<Rational>>,
}

impl ExactJordanForm {
    /// Builds a form from a caller-supplied transform, checking `M·P = P·J`
    /// and that `P` is nonsingular.
    pub fn from_parts(
        m: &RationalMatrix,
        p: RationalMatrix,
        blocks: Vec<JordanBlock<Rational>>,
    ) -> Result<Self> {
        let n = m.require_square()?;
        if p.rows() != n || p.cols() != n || blocks.iter().map(|b| b.size).sum::<usize>() != n {
            return Err(Error::ShapeMismatch(
                "jordan transform does not match matrix".into(),
            ));
        }
        let jf = Self { p, blocks };
        if jf.p.det()?.is_zero() {
            return Err(Error::Singular);
        }
        if m * &jf.p != &jf.p * &jf.j_matrix() {
            return Err(Error::InvalidConfig(
                "M·P ≠ P·J for the supplied decomposition".into(),
            ));
        }
        Ok(jf)
    }

    pub fn n(&self) -> usize {
        self.p.rows()
    }

    pub fn j_matrix(&self) -> RationalMatrix {
        jordan_matrix(&self.blocks)
    }

    pub fn p_inverse(&self) -> RationalMatrix {
        self.p.inverse().expect("jordan transform is nonsingular")
    }

    /// `P·J·P⁻¹`.
    pub fn reconstruct(&self) -> RationalMatrix {
        &(&self.p * &self.j_matrix()) * &self.p_inverse()
    }

    /// The same decomposition moved to `S·M·S⁻¹`: transform `S·P`, same blocks.
    pub fn transported(&self, s: &RationalMatrix) -> Result<Self> {
        if s.det()?.is_zero() {
            return Err(Error::Singular);
        }
        Ok(Self {
            p: s.try_mul(&self.p)?,
            blocks: self.blocks.clone(),
        })
    }
}

pub fn jordan_matrix(blocks: &[JordanBlock<Rational>]) -> RationalMatrix {
    let n: usize = blocks.iter().map(|b| b.size).sum();
    let mut j = RationalMatrix::zeros(n.max(1), n.max(1));
    let mut at = 0;
    for b in blocks {
        for k in 0..b.size {
            j[(at + k, at + k)] = b.eigenvalue.clone();
            if k + 1 < b.size {
                j[(at + k, at + k + 1)] = Rational::one();
            }
        }
        at += b.size;
    }
    j
}

/// Exact Jordan decomposition for matrices whose spectrum is rational.
///
/// Block sizes for each eigenvalue `λ` come from the rank sequence
/// `rⱼ = rank((M−λI)ʲ)`: the number of blocks of size at least `j` is
/// `rⱼ₋₁ − rⱼ`. Chains are picked top-down from the RREF nullspace basis of
/// `(M−λI)ʲ`, taking candidates in order and keeping each one that is
/// independent of `ker (M−λI)ʲ⁻¹` plus the vectors already chosen at that level.
pub fn exact_jordan(m: &RationalMatrix) -> Result<ExactJordanForm> {
    let n = m.require_square()?;
    let roots = rational_roots(&charpoly(m)?)?;

    let mut columns: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut blocks = Vec::new();
    for (lambda, mult) in roots {
        let shifted = m.shifted(&lambda)?;
        for chain in eigenvalue_chains(&shifted, mult)? {
            blocks.push(JordanBlock {
                eigenvalue: lambda.clone(),
                size: chain.len(),
            });
            columns.extend(chain);
        }
    }
    let p = RationalMatrix::from_columns(&columns)?;
    let jf = ExactJordanForm { p, blocks };
    debug_assert_eq!(m * &jf.p, &jf.p * &jf.j_matrix());
    Ok(jf)
}

/// Jordan chains for one eigenvalue, longest first. Each chain is returned as
/// `[B^{s−1}v, …, Bv, v]` where `B = M − λI`.
fn eigenvalue_chains(b: &RationalMatrix, mult: usize) -> Result<Vec<Vec<Vec<Rational>>>> {
    let n = b.rows();
    let target = n - mult;
    let mut powers = vec![RationalMatrix::identity(n)];
    let mut ranks = vec![n];
    while *ranks.last().expect("seeded") > target {
        if powers.len() > mult {
            // rank((M-λI)^mult) = n - mult always holds exactly
            return Err(Error::InvalidConfig(
                "rank sequence did not stabilize".into(),
            ));
        }
        let next = b * powers.last().expect("seeded");
        ranks.push(rank(&next));
        powers.push(next);
    }
    let height = ranks.len() - 1;
    let at_least = |j: usize| {
        if j == 0 || j > height {
            0
        } else {
            ranks[j - 1] - ranks[j]
        }
    };
    let kernels: Vec<Vec<Vec<Rational>>> = powers.iter().map(nullspace_vectors).collect();

    // tops[i] = (chain length, top vector)
    let mut tops: Vec<(usize, Vec<Rational>)> = Vec::new();
    for level in (1..=height).rev() {
        let needed = at_least(level) - at_least(level + 1);
        if needed == 0 {
            continue;
        }
        let mut base: Vec<Vec<Rational>> = kernels[level - 1].clone();
        for (len, top) in &tops {
            base.push(apply_power(b, top, len - level));
        }
        let mut base_rank = column_rank(&base);
        let mut chosen = 0;
        for cand in &kernels[level] {
            if chosen == needed {
                break;
            }
            base.push(cand.clone());
            let r = column_rank(&base);
            if r > base_rank {
                base_rank = r;
                tops.push((level, cand.clone()));
                chosen += 1;
            } else {
                base.pop();
            }
        }
        if chosen != needed {
            return Err(Error::InvalidConfig(
                "could not complete jordan chains".into(),
            ));
        }
    }

    Ok(tops
        .into_iter()
        .map(|(len, top)| (0..len).rev().map(|k| apply_power(b, &top, k)).collect())
        .collect())
}

fn apply_power(b: &RationalMatrix, v: &[Rational], k: usize) -> Vec<Rational> {
    let mut out = v.to_vec();
    for _ in 0..k {
        out = mat_vec(b, &out);
    }
    out
}

/// True when every block with eigenvalue 0 has size 1, i.e. the index is at most 1.
pub fn zero_blocks_are_trivial(blocks: &[JordanBlock<Rational>]) -> bool {
    blocks
        .iter()
        .all(|b| !b.eigenvalue.is_zero() || b.size == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::matrix::rat;

    fn sizes(jf: &ExactJordanForm) -> Vec<(Rational, usize)> {
        jf.blocks
            .iter()
            .map(|b| (b.eigenvalue.clone(), b.size))
            .collect()
    }

    #[test]
    fn worked_nilpotent_is_one_block_of_three() {
        let a = RationalMatrix::from_i64_rows(&[[4, -1, 2], [7, -2, 3], [-4, 1, -2]]);
        let jf = exact_jordan(&a).unwrap();
        assert_eq!(sizes(&jf), vec![(rat(0), 3)]);
        assert_eq!(jf.reconstruct(), a);
    }

    #[test]
    fn one_by_one() {
        let m = RationalMatrix::from_i64_rows(&[[5]]);
        let jf = exact_jordan(&m).unwrap();
        assert_eq!(sizes(&jf), vec![(rat(5), 1)]);
        assert_eq!(jf.p, RationalMatrix::identity(1));
    }

    #[test]
    fn defective_two_by_two() {
        let m = RationalMatrix::from_i64_rows(&[[1, 1], [0, 1]]);
        let jf = exact_jordan(&m).unwrap();
        assert_eq!(sizes(&jf), vec![(rat(1), 2)]);
        assert_eq!(jf.reconstruct(), m);
    }

    #[test]
    fn canonical_order_mixed_blocks() {
        // blocks (2,1), (-1,2), (-1,1) scrambled by a unimodular similarity
        let j = jordan_matrix(&[
            JordanBlock {
                eigenvalue: rat(2),
                size: 1,
            },
            JordanBlock {
                eigenvalue: rat(-1),
                size: 1,
            },
            JordanBlock {
                eigenvalue: rat(-1),
                size: 2,
            },
        ]);
        let s = RationalMatrix::from_i64_rows(&[
            [1, 2, 0, 1],
            [0, 1, 1, 0],
            [1, 0, 1, 2],
            [0, 1, 0, 1],
        ]);
        let m = &(&s * &j) * &s.inverse().unwrap();
        let jf = exact_jordan(&m).unwrap();
        assert_eq!(sizes(&jf), vec![(rat(-1), 2), (rat(-1), 1), (rat(2), 1)]);
        assert_eq!(jf.reconstruct(), m);
    }

    #[test]
    fn irrational_spectrum_is_refused() {
        let m = RationalMatrix::from_i64_rows(&[[0, 2], [1, 0]]);
        assert_eq!(exact_jordan(&m), Err(Error::IrrationalSpectrum));
        assert!(matches!(
            exact_jordan(&RationalMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn supplied_decomposition_is_validated() {
        let a = RationalMatrix::from_i64_rows(&[[4, -1, 2], [7, -2, 3], [-4, 1, -2]]);
        let blocks = vec![JordanBlock {
            eigenvalue: rat(0),
            size: 3,
        }];
        // As printed in the source example, entry (1,3) is -3; only +3 satisfies A·P = P·J.
        let printed = RationalMatrix::from_i64_rows(&[[1, -2, -3], [2, -5, 10], [-1, 2, -2]]);
        assert!(ExactJordanForm::from_parts(&a, printed, blocks.clone()).is_err());
        let fixed = RationalMatrix::from_i64_rows(&[[1, -2, 3], [2, -5, 10], [-1, 2, -2]]);
        let jf = ExactJordanForm::from_parts(&a, fixed, blocks).unwrap();
        assert_eq!(jf.reconstruct(), a);
    }
}
