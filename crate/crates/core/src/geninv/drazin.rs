use num_traits::Zero;

use crate::error::Result;
use crate::exact::{exact_jordan, exact_mp_inverse, rank, ExactJordanForm, RationalMatrix};
use crate::float::{
    mp_inverse, numerical_jordan, svd, ComplexMatrix, JordanOptions, NumericJordanForm, Threshold,
    EPS,
};

/// Drazin inverse of a Jordan matrix, block by block. Non-nilpotent blocks use
/// `(λI+N)⁻¹ = Σⱼ (−1)ʲ λ^{−(j+1)} Nʲ`; nilpotent blocks map to zero.
fn block_drazin_exact(jf: &ExactJordanForm) -> RationalMatrix {
    let n = jf.n();
    let mut out = RationalMatrix::zeros(n, n);
    let mut at = 0;
    for b in &jf.blocks {
        if !b.eigenvalue.is_zero() {
            let inv = b.eigenvalue.recip();
            let mut coef = inv.clone();
            for j in 0..b.size {
                for r in 0..b.size - j {
                    out[(at + r, at + r + j)] = coef.clone();
                }
                coef = -(&coef * &inv);
            }
        }
        at += b.size;
    }
    out
}

fn block_drazin_float(jf: &NumericJordanForm, zero_tol: f64) -> ComplexMatrix {
    let n = jf.n();
    let mut out = ComplexMatrix::zeros(n, n);
    let mut at = 0;
    for b in &jf.blocks {
        if b.eigenvalue.norm() > zero_tol {
            let inv = b.eigenvalue.inv();
            let mut coef = inv;
            for j in 0..b.size {
                for r in 0..b.size - j {
                    out[(at + r, at + r + j)] = coef;
                }
                coef = -(coef * inv);
            }
        }
        at += b.size;
    }
    out
}

pub fn drazin_from_jordan(jf: &ExactJordanForm) -> RationalMatrix {
    &(&jf.p * &block_drazin_exact(jf)) * &jf.p_inverse()
}

pub fn drazin_inverse_exact(m: &RationalMatrix) -> Result<RationalMatrix> {
    Ok(drazin_from_jordan(&exact_jordan(m)?))
}

/// Eigenvalues with `|λ| ≤ jf.cluster_tol` are treated as zero.
pub fn drazin_from_numeric(jf: &NumericJordanForm) -> Result<ComplexMatrix> {
    let jd = block_drazin_float(jf, jf.cluster_tol);
    Ok(&(&jf.p * &jd) * &jf.p_inverse()?)
}

pub fn drazin_inverse_float(m: &ComplexMatrix, opts: &JordanOptions) -> Result<ComplexMatrix> {
    drazin_from_numeric(&numerical_jordan(m, opts)?)
}

/// Smallest `k` with `rank(M^{k+1}) = rank(M^k)`.
pub fn drazin_index_exact(m: &RationalMatrix) -> Result<usize> {
    let n = m.require_square()?;
    let mut power = RationalMatrix::identity(n);
    let mut prev = n;
    for k in 0..=n {
        power = &power * m;
        let r = rank(&power);
        if r == prev {
            return Ok(k);
        }
        prev = r;
    }
    Ok(n)
}

/// Float index: ranks of `Mᵏ` use the threshold `n·ε·‖M‖₂ᵏ`, so that powers
/// of a nilpotent matrix that are zero up to rounding count as rank 0.
pub fn drazin_index_float(m: &ComplexMatrix) -> Result<usize> {
    let n = m.require_square()?;
    let norm = crate::float::norm2(m)?;
    let mut power = ComplexMatrix::identity(n);
    let mut prev = n;
    for k in 0..=n {
        power = &power * m;
        let tol = n as f64 * EPS * norm.powi(k as i32 + 1);
        let r = svd(&power)?.rank_above(tol);
        if r == prev {
            return Ok(k);
        }
        prev = r;
    }
    Ok(n)
}

/// `Aᵏ·(A^{2k+1})⁺·Aᵏ` with `k` the index; an independent route to `Aᴰ`.
pub fn drazin_via_powers_exact(m: &RationalMatrix) -> Result<RationalMatrix> {
    let k = drazin_index_exact(m)?;
    let ak = m.pow(k as u32)?;
    let mid = exact_mp_inverse(&m.pow(2 * k as u32 + 1)?);
    Ok(&(&ak * &mid) * &ak)
}

pub fn drazin_via_powers_float(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let k = drazin_index_float(m)?;
    let ak = m.pow(k as u32)?;
    let mid = mp_inverse(&m.pow(2 * k as u32 + 1)?, Threshold::Auto)?;
    Ok(&(&ak * &mid) * &ak)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    fn worked_a() -> RationalMatrix {
        RationalMatrix::from_i64_rows(&[[4, -1, 2], [7, -2, 3], [-4, 1, -2]])
    }

    #[test]
    fn nilpotent_has_zero_drazin() {
        assert!(drazin_inverse_exact(&worked_a()).unwrap().is_zero());
        assert_eq!(drazin_index_exact(&worked_a()).unwrap(), 3);
        let af = ComplexMatrix::from_rational(&worked_a());
        assert_eq!(drazin_index_float(&af).unwrap(), 3);
        assert!(
            drazin_inverse_float(&af, &JordanOptions::default())
                .unwrap()
                .max_abs()
                < 1e-9
        );
    }

    #[test]
    fn index_one_and_nonsingular() {
        let d = RationalMatrix::diag(&[rat(2), rat(0)]);
        assert_eq!(
            drazin_inverse_exact(&d).unwrap(),
            RationalMatrix::diag(&[ratio(1, 2), rat(0)])
        );
        assert_eq!(drazin_index_exact(&d).unwrap(), 1);
        let m = RationalMatrix::from_i64_rows(&[[4, 1], [2, 3]]);
        assert_eq!(drazin_index_exact(&m).unwrap(), 0);
        assert_eq!(drazin_inverse_exact(&m).unwrap(), m.inverse().unwrap());
    }

    #[test]
    fn block_inverse_of_defective_block() {
        // [[2,1],[0,2]]⁻¹ = [[1/2,-1/4],[0,1/2]]
        let m = RationalMatrix::from_i64_rows(&[[2, 1], [0, 2]]);
        assert_eq!(drazin_inverse_exact(&m).unwrap(), m.inverse().unwrap());
    }

    #[test]
    fn power_formula_agrees() {
        let m = RationalMatrix::from_i64_rows(&[[1, 1, 0], [0, 0, 1], [0, 0, 0]]);
        let d = drazin_inverse_exact(&m).unwrap();
        assert_eq!(d, drazin_via_powers_exact(&m).unwrap());
        let f = drazin_via_powers_float(&ComplexMatrix::from_rational(&m)).unwrap();
        assert!(f.max_abs_diff(&ComplexMatrix::from_rational(&d)) < 1e-9);
    }
}
