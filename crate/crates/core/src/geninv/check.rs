use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rank, Rational, RationalMatrix};
use crate::float::{numeric_rank, ComplexMatrix};

/// Residuals of the two generalized-inverse axioms `AXA = A`, `XAX = X`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PenroseReport<R> {
    pub residual_axiom1: R,
    pub residual_axiom2: R,
    pub rank_a: usize,
    pub rank_x: usize,
}

fn conformable(a: (usize, usize), x: (usize, usize)) -> Result<()> {
    if a.0 != x.1 || a.1 != x.0 {
        return Err(Error::ShapeMismatch(format!(
            "inverse candidate is {}x{} for a {}x{} matrix",
            x.0, x.1, a.0, a.1
        )));
    }
    Ok(())
}

pub fn penrose_check_exact(
    a: &RationalMatrix,
    x: &RationalMatrix,
) -> Result<PenroseReport<Rational>> {
    conformable((a.rows(), a.cols()), (x.rows(), x.cols()))?;
    let axa = &(a * x) * a;
    let xax = &(x * a) * x;
    Ok(PenroseReport {
        residual_axiom1: axa.try_sub(a)?.max_abs(),
        residual_axiom2: xax.try_sub(x)?.max_abs(),
        rank_a: rank(a),
        rank_x: rank(x),
    })
}

pub fn penrose_check(a: &ComplexMatrix, x: &ComplexMatrix) -> Result<PenroseReport<f64>> {
    conformable((a.rows(), a.cols()), (x.rows(), x.cols()))?;
    let axa = &(a * x) * a;
    let xax = &(x * a) * x;
    Ok(PenroseReport {
        residual_axiom1: axa.max_abs_diff(a),
        residual_axiom2: xax.max_abs_diff(x),
        rank_a: numeric_rank(a)?,
        rank_x: numeric_rank(x)?,
    })
}

/// A transformation `M ↦ L·M·R` together with the law its inverse should obey,
/// `inv(L·M·R) = R⁻¹·inv(M)·L⁻¹`.
#[derive(Debug, Clone)]
pub enum Transform<T> {
    /// `S·M·S⁻¹`
    Similarity(T),
    /// `U·M·V`
    Unitary(T, T),
    /// `D·M·E` with `D`, `E` diagonal
    Diagonal(T, T),
}

impl Transform<RationalMatrix> {
    fn sides(&self) -> Result<[RationalMatrix; 4]> {
        Ok(match self {
            Transform::Similarity(s) => {
                let si = s.inverse()?;
                [s.clone(), si.clone(), s.clone(), si]
            }
            Transform::Unitary(l, r) | Transform::Diagonal(l, r) => {
                [l.clone(), r.clone(), r.inverse()?, l.inverse()?]
            }
        })
    }

    pub fn apply(&self, m: &RationalMatrix) -> Result<RationalMatrix> {
        let [l, r, _, _] = self.sides()?;
        l.try_mul(m)?.try_mul(&r)
    }
}

impl Transform<ComplexMatrix> {
    fn sides(&self) -> Result<[ComplexMatrix; 4]> {
        Ok(match self {
            Transform::Similarity(s) => {
                let si = s.inverse()?;
                [s.clone(), si.clone(), s.clone(), si]
            }
            Transform::Unitary(u, v) => [u.clone(), v.clone(), v.adjoint(), u.adjoint()],
            Transform::Diagonal(d, e) => [d.clone(), e.clone(), e.inverse()?, d.inverse()?],
        })
    }

    pub fn apply(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        let [l, r, _, _] = self.sides()?;
        l.try_mul(m)?.try_mul(&r)
    }
}

/// `‖inv(L·M·R) − R⁻¹·inv(M)·L⁻¹‖_max` for an arbitrary inverse map.
pub fn consistency_deviation_exact(
    m: &RationalMatrix,
    t: &Transform<RationalMatrix>,
    inv: impl Fn(&RationalMatrix) -> Result<RationalMatrix>,
) -> Result<Rational> {
    let [l, r, r_inv, l_inv] = t.sides()?;
    let lhs = inv(&l.try_mul(m)?.try_mul(&r)?)?;
    let rhs = r_inv.try_mul(&inv(m)?)?.try_mul(&l_inv)?;
    Ok(lhs.try_sub(&rhs)?.max_abs())
}

pub fn consistency_deviation(
    m: &ComplexMatrix,
    t: &Transform<ComplexMatrix>,
    inv: impl Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
) -> Result<f64> {
    let [l, r, r_inv, l_inv] = t.sides()?;
    let lhs = inv(&l.try_mul(m)?.try_mul(&r)?)?;
    let rhs = r_inv.try_mul(&inv(m)?)?.try_mul(&l_inv)?;
    Ok(lhs.max_abs_diff(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_mp_inverse, rat};
    use crate::float::{mp_inverse, Threshold};
    use num_traits::Zero;

    #[test]
    fn drazin_zero_is_not_a_generalized_inverse() {
        let a = RationalMatrix::from_i64_rows(&[[4, -1, 2], [7, -2, 3], [-4, 1, -2]]);
        let rep = penrose_check_exact(&a, &RationalMatrix::zeros(3, 3)).unwrap();
        assert_eq!(rep.residual_axiom1, rat(7));
        assert!(rep.residual_axiom2.is_zero());
        assert_eq!((rep.rank_a, rep.rank_x), (2, 0));
    }

    #[test]
    fn mp_satisfies_axioms() {
        let a = ComplexMatrix::from_real_rows(&[[1.0, 2.0], [2.0, 4.0], [0.0, 1.0]]);
        let rep = penrose_check(&a, &mp_inverse(&a, Threshold::Auto).unwrap()).unwrap();
        assert!(rep.residual_axiom1 < 1e-12 && rep.residual_axiom2 < 1e-12);
        assert!(penrose_check(&a, &a).is_err());
    }

    #[test]
    fn mp_is_not_similarity_consistent() {
        let a = RationalMatrix::from_i64_rows(&[[1, 1], [0, 0]]);
        let s = RationalMatrix::from_i64_rows(&[[1, 2], [0, 1]]);
        let dev =
            consistency_deviation_exact(&a, &Transform::Similarity(s), |m| Ok(exact_mp_inverse(m)))
                .unwrap();
        assert!(!dev.is_zero());
        let d = Transform::Diagonal(
            RationalMatrix::diag(&[rat(2), rat(3)]),
            RationalMatrix::identity(2),
        );
        assert_eq!(
            d.apply(&a).unwrap(),
            RationalMatrix::from_i64_rows(&[[2, 2], [0, 0]])
        );
    }
}
