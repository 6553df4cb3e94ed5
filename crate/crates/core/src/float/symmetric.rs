use num_complex::Complex64;

use super::jordan::NumericJordanForm;
use super::matrix::{c, ComplexMatrix};
use crate::error::Result;

/// `M = S·X·S⁻¹` with `X` complex symmetric, built block by block from a
/// Jordan form.
///
/// For a block `J_b = λI + N` of size `s`, with `E` the `s×s` exchange matrix,
/// `U_b = (E + iI)/√2` is unitary and
/// `X_b = U_b·J_b·U_b* = λI + ½(N + Nᵀ) + (i/2)(NE − EN)`.
/// `S = P·diag(U_b*)`. Only the upper triangle of each `X_b` is computed and
/// mirrored, so `X == Xᵀ` holds bit for bit.
#[derive(Debug, Clone)]
pub struct SymmetricForm {
    pub s: ComplexMatrix,
    pub x: ComplexMatrix,
    /// `diag(U_b)`, so that `S⁻¹ = diag(U_b)·P⁻¹`.
    pub u: ComplexMatrix,
}

pub fn complex_symmetric_form(jf: &NumericJordanForm) -> Result<SymmetricForm> {
    let n = jf.n();
    let mut x = ComplexMatrix::zeros(n, n);
    let mut u = ComplexMatrix::zeros(n, n);
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut at = 0;
    for b in &jf.blocks {
        let s = b.size;
        for r in 0..s {
            for col in r..s {
                let v = symmetric_block_entry(b.eigenvalue, s, r, col);
                x[(at + r, at + col)] = v;
                x[(at + col, at + r)] = v;
            }
            // U_b = (E + iI)/√2
            u[(at + r, at + s - 1 - r)] += c(r2);
            u[(at + r, at + r)] += Complex64::new(0.0, r2);
        }
        at += s;
    }
    let s = &jf.p * &u.adjoint();
    Ok(SymmetricForm { s, x, u })
}

/// Entry `(r, c)` of `λI + ½(N+Nᵀ) + (i/2)(NE − EN)` for one block of size `s`.
/// `(NE)_{rc} = 1` iff `r + c = s − 2`; `(EN)_{rc} = 1` iff `r + c = s`.
fn symmetric_block_entry(lambda: Complex64, s: usize, r: usize, col: usize) -> Complex64 {
    let mut v = Complex64::new(0.0, 0.0);
    if r == col {
        v += lambda;
    }
    if r.abs_diff(col) == 1 {
        v += c(0.5);
    }
    if r + col + 2 == s {
        v += Complex64::new(0.0, 0.5);
    }
    if r + col == s {
        v -= Complex64::new(0.0, 0.5);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::JordanBlock;

    fn form_for(blocks: Vec<JordanBlock<Complex64>>) -> (NumericJordanForm, SymmetricForm) {
        let n = blocks.iter().map(|b| b.size).sum();
        let jf = NumericJordanForm {
            p: ComplexMatrix::identity(n),
            blocks,
            residual: 0.0,
            cluster_tol: 0.0,
        };
        let sf = complex_symmetric_form(&jf).unwrap();
        (jf, sf)
    }

    #[test]
    fn nilpotent_pair_block() {
        let (jf, sf) = form_for(vec![JordanBlock {
            eigenvalue: c(0.0),
            size: 2,
        }]);
        let want = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new(0.0, 0.5),
                c(0.5),
                c(0.5),
                Complex64::new(0.0, -0.5),
            ],
        )
        .unwrap();
        assert_eq!(sf.x, want);
        // X_b = U J U*
        let ujuh = &(&sf.u * &jf.j_matrix()) * &sf.u.adjoint();
        assert!(ujuh.max_abs_diff(&sf.x) < 1e-15);
    }

    #[test]
    fn diagonalizable_input_gives_diagonal_x() {
        let (_, sf) = form_for(vec![
            JordanBlock {
                eigenvalue: c(2.0),
                size: 1,
            },
            JordanBlock {
                eigenvalue: Complex64::new(1.0, 1.0),
                size: 1,
            },
        ]);
        assert_eq!(
            sf.x,
            ComplexMatrix::diag(&[c(2.0), Complex64::new(1.0, 1.0)])
        );
    }

    #[test]
    fn size_three_block_is_symmetric_and_nilpotent() {
        let (jf, sf) = form_for(vec![JordanBlock {
            eigenvalue: c(0.0),
            size: 3,
        }]);
        assert_eq!(sf.x, sf.x.transpose());
        assert!(sf.x.pow(3).unwrap().max_abs() < 1e-8);
        let recon = &(&sf.s * &sf.x) * &(&sf.u * &jf.p_inverse().unwrap());
        assert!(recon.max_abs_diff(&jf.j_matrix()) < 1e-14);
    }
}
