use crate::error::Result;
use crate::exact::{exact_jordan, exact_mp_inverse, ExactJordanForm, RationalMatrix};
use crate::float::{
    complex_symmetric_form, mp_inverse_with, numerical_jordan, ComplexMatrix, NumericJordanForm,
    RankMode,
};

use super::InverseOptions;

/// `P·J⁺·P⁻¹` for a given exact decomposition.
pub fn sc_inverse_from_jordan(jf: &ExactJordanForm) -> RationalMatrix {
    let j_pinv = exact_mp_inverse(&jf.j_matrix());
    &(&jf.p * &j_pinv) * &jf.p_inverse()
}

/// Exact SC inverse from the canonical Jordan decomposition of `m`.
///
/// The result depends on the chosen Jordan basis whenever a zero-eigenvalue
/// block has size ≥ 2; see [`sc_is_basis_independent`].
pub fn sc_inverse_exact(m: &RationalMatrix) -> Result<RationalMatrix> {
    Ok(sc_inverse_from_jordan(&exact_jordan(m)?))
}

/// `P·J⁺·P⁻¹` for a numerical decomposition, with `J⁺` evaluated under `mode`.
pub fn sc_inverse_from_numeric(jf: &NumericJordanForm, mode: RankMode) -> Result<ComplexMatrix> {
    let j_pinv = mp_inverse_with(&jf.j_matrix(), mode)?;
    Ok(&(&jf.p * &j_pinv) * &jf.p_inverse()?)
}

pub fn sc_inverse_float(m: &ComplexMatrix, opts: &InverseOptions) -> Result<ComplexMatrix> {
    let jf = numerical_jordan(m, &opts.jordan)?;
    sc_inverse_from_numeric(&jf, opts.rank_mode)
}

/// `S·X⁺·S⁻¹` through the complex-symmetric similarity form.
pub fn sc_inverse_symmetric(m: &ComplexMatrix, opts: &InverseOptions) -> Result<ComplexMatrix> {
    let jf = numerical_jordan(m, &opts.jordan)?;
    sc_inverse_symmetric_from(&jf, opts.rank_mode)
}

pub fn sc_inverse_symmetric_from(jf: &NumericJordanForm, mode: RankMode) -> Result<ComplexMatrix> {
    let sf = complex_symmetric_form(jf)?;
    let x_pinv = mp_inverse_with(&sf.x, mode)?;
    let s_inv = &sf.u * &jf.p_inverse()?;
    Ok(&(&sf.s * &x_pinv) * &s_inv)
}

/// Whether `P·J⁺·P⁻¹` is the same for every valid Jordan basis `P`.
///
/// Changing basis replaces `J⁺` by `C·J⁺·C⁻¹` with `C` commuting with `J`.
/// Blocks with `λ ≠ 0` have `J_b⁺ = J_b⁻¹`, a polynomial in `J_b`, so they are
/// unaffected; a nilpotent block of size ≥ 2 has `J_b⁺ = J_bᵀ`, which does not
/// commute with the upper-triangular Toeplitz `C`. So the SC inverse is a
/// function of the matrix alone exactly when the index is at most 1, and then
/// it coincides with the group (Drazin) inverse.
pub fn sc_is_basis_independent<T: PartialEq + Default>(
    blocks: &[crate::exact::JordanBlock<T>],
    is_zero: impl Fn(&T) -> bool,
) -> bool {
    blocks
        .iter()
        .all(|b| !is_zero(&b.eigenvalue) || b.size == 1)
}

/// `‖SC(S·P, J) − S·SC(P, J)·S⁻¹‖_max` for the decomposition carried to
/// `S·M·S⁻¹` with transform `S·P`. Zero in exact arithmetic.
pub fn sc_transport_deviation(
    jf: &ExactJordanForm,
    s: &RationalMatrix,
) -> Result<crate::exact::Rational> {
    let moved = sc_inverse_from_jordan(&jf.transported(s)?);
    let carried = &(s * &sc_inverse_from_jordan(jf)) * &s.inverse()?;
    Ok(moved.try_sub(&carried)?.max_abs())
}
