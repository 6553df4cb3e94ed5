//! Generalized inverses (Moore-Penrose, unit-consistent, Drazin,
//! similarity-consistent), the relative gain array and consistency checks.

mod check;
mod drazin;
pub mod random;
mod sc;
mod uc;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{exact_mp_inverse, Rational, RationalMatrix};
use crate::float::{mp_inverse_with, numeric_rank, ComplexMatrix, JordanOptions, RankMode};

pub use check::{
    consistency_deviation, consistency_deviation_exact, penrose_check, penrose_check_exact,
    PenroseReport, Transform,
};
pub use drazin::{
    drazin_from_jordan, drazin_from_numeric, drazin_index_exact, drazin_index_float,
    drazin_inverse_exact, drazin_inverse_float, drazin_via_powers_exact, drazin_via_powers_float,
};
pub use sc::{
    sc_inverse_exact, sc_inverse_float, sc_inverse_from_jordan, sc_inverse_from_numeric,
    sc_inverse_symmetric, sc_inverse_symmetric_from, sc_is_basis_independent,
    sc_transport_deviation,
};
pub use uc::{
    uc_factors, uc_inverse, uc_inverse_with, BalanceMeta, UcFactors, BALANCE_MAX_ITER, BALANCE_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InverseKind {
    Mp,
    Uc,
    Drazin,
    ScJordan,
    ScSymmetric,
}

impl InverseKind {
    pub const ALL: [InverseKind; 5] = [
        InverseKind::Mp,
        InverseKind::Uc,
        InverseKind::Drazin,
        InverseKind::ScJordan,
        InverseKind::ScSymmetric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InverseKind::Mp => "mp",
            InverseKind::Uc => "uc",
            InverseKind::Drazin => "drazin",
            InverseKind::ScJordan => "sc-jordan",
            InverseKind::ScSymmetric => "sc-symmetric",
        }
    }

    pub fn has_exact_backend(self) -> bool {
        matches!(
            self,
            InverseKind::Mp | InverseKind::Drazin | InverseKind::ScJordan
        )
    }

    pub fn requires_square(self) -> bool {
        matches!(
            self,
            InverseKind::Drazin | InverseKind::ScJordan | InverseKind::ScSymmetric
        )
    }
}

impl fmt::Display for InverseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InverseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        Ok(match norm.as_str() {
            "mp" | "pinv" => InverseKind::Mp,
            "uc" => InverseKind::Uc,
            "drazin" => InverseKind::Drazin,
            "sc" | "sc-jordan" => InverseKind::ScJordan,
            "sc-symmetric" | "sc-sym" => InverseKind::ScSymmetric,
            _ => return Err(Error::Parse(format!("unknown inverse kind '{s}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

/// Settings for the floating-point backend.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct InverseOptions {
    /// How the Moore-Penrose inverse (or `J⁺`, `X⁺`, `S_core⁺`) picks its rank.
    pub rank_mode: RankMode,
    pub jordan: JordanOptions,
}

/// A matrix in either backend's representation.
#[derive(Debug, Clone, PartialEq)]
pub enum Operand {
    Exact(RationalMatrix),
    Float(ComplexMatrix),
}

impl Operand {
    pub fn to_float(&self) -> ComplexMatrix {
        match self {
            Operand::Exact(m) => ComplexMatrix::from_rational(m),
            Operand::Float(m) => m.clone(),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            Operand::Exact(m) => (m.rows(), m.cols()),
            Operand::Float(m) => (m.rows(), m.cols()),
        }
    }
}

pub fn inverse_exact(m: &RationalMatrix, kind: InverseKind) -> Result<RationalMatrix> {
    match kind {
        InverseKind::Mp => Ok(exact_mp_inverse(m)),
        InverseKind::Drazin => drazin_inverse_exact(m),
        InverseKind::ScJordan => sc_inverse_exact(m),
        InverseKind::Uc | InverseKind::ScSymmetric => Err(Error::Unsupported {
            op: "exact inverse",
            what: kind.to_string(),
        }),
    }
}

pub fn inverse_float(
    m: &ComplexMatrix,
    kind: InverseKind,
    opts: &InverseOptions,
) -> Result<ComplexMatrix> {
    if kind.requires_square() {
        m.require_square()?;
    }
    match kind {
        InverseKind::Mp => mp_inverse_with(m, opts.rank_mode),
        InverseKind::Uc => Ok(uc_inverse_with(m, opts.rank_mode)?.0),
        InverseKind::Drazin => drazin_inverse_float(m, &opts.jordan),
        InverseKind::ScJordan => sc_inverse_float(m, opts),
        InverseKind::ScSymmetric => sc_inverse_symmetric(m, opts),
    }
}

/// Backend dispatch. The exact backend needs exact input; the float backend
/// accepts either.
pub fn inverse(
    m: &Operand,
    kind: InverseKind,
    backend: Backend,
    opts: &InverseOptions,
) -> Result<Operand> {
    match (backend, m) {
        (Backend::Exact, Operand::Exact(x)) => Ok(Operand::Exact(inverse_exact(x, kind)?)),
        (Backend::Exact, Operand::Float(_)) => Err(Error::Unsupported {
            op: "exact backend",
            what: "floating-point input".into(),
        }),
        (Backend::Float, _) => Ok(Operand::Float(inverse_float(&m.to_float(), kind, opts)?)),
    }
}

pub fn sc_inverse(m: &Operand, backend: Backend, opts: &InverseOptions) -> Result<Operand> {
    inverse(m, InverseKind::ScJordan, backend, opts)
}

pub fn drazin_inverse(m: &Operand, backend: Backend, opts: &InverseOptions) -> Result<Operand> {
    inverse(m, InverseKind::Drazin, backend, opts)
}

pub fn drazin_index(m: &Operand, backend: Backend) -> Result<usize> {
    match (backend, m) {
        (Backend::Exact, Operand::Exact(x)) => drazin_index_exact(x),
        (Backend::Exact, Operand::Float(_)) => Err(Error::Unsupported {
            op: "exact backend",
            what: "floating-point input".into(),
        }),
        (Backend::Float, _) => drazin_index_float(&m.to_float()),
    }
}

/// Deviation from the consistency law of `kind` under `t`, float backend.
pub fn consistency_check(
    m: &ComplexMatrix,
    kind: InverseKind,
    t: &Transform<ComplexMatrix>,
    opts: &InverseOptions,
) -> Result<f64> {
    consistency_deviation(m, t, |x| inverse_float(x, kind, opts))
}

pub fn consistency_check_exact(
    m: &RationalMatrix,
    kind: InverseKind,
    t: &Transform<RationalMatrix>,
) -> Result<Rational> {
    consistency_deviation_exact(m, t, |x| inverse_exact(x, kind))
}

/// `M ∘ inv(M)ᵀ`. Kinds other than MP and UC need a nonsingular `M`.
pub fn rga(m: &ComplexMatrix, kind: InverseKind, opts: &InverseOptions) -> Result<ComplexMatrix> {
    if !matches!(kind, InverseKind::Mp | InverseKind::Uc) {
        let n = m.require_square()?;
        if numeric_rank(m)? < n {
            return Err(Error::Singular);
        }
    }
    let x = inverse_float(m, kind, opts)?;
    m.hadamard(&x.transpose())
}

pub fn rga_exact(m: &RationalMatrix, kind: InverseKind) -> Result<RationalMatrix> {
    if kind != InverseKind::Mp {
        let n = m.require_square()?;
        if crate::exact::rank(m) < n {
            return Err(Error::Singular);
        }
    }
    let x = inverse_exact(m, kind)?;
    m.hadamard(&x.transpose())
}

/// `a = inv(M)·y`.
pub fn solve_linear_model(
    m: &ComplexMatrix,
    y: &[Complex64],
    kind: InverseKind,
    opts: &InverseOptions,
) -> Result<Vec<Complex64>> {
    if y.len() != m.rows() {
        return Err(Error::ShapeMismatch(format!(
            "y has {} entries for {} rows",
            y.len(),
            m.rows()
        )));
    }
    Ok(inverse_float(m, kind, opts)?.mat_vec(y))
}

pub fn solve_linear_model_exact(
    m: &RationalMatrix,
    y: &[Rational],
    kind: InverseKind,
) -> Result<Vec<Rational>> {
    if y.len() != m.rows() {
        return Err(Error::ShapeMismatch(format!(
            "y has {} entries for {} rows",
            y.len(),
            m.rows()
        )));
    }
    Ok(inverse_exact(m, kind)?.mat_vec(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    #[test]
    fn kind_names_round_trip() {
        for k in InverseKind::ALL {
            assert_eq!(k.name().parse::<InverseKind>().unwrap(), k);
        }
        assert!("nope".parse::<InverseKind>().is_err());
    }

    #[test]
    fn rga_two_by_two() {
        let m = ComplexMatrix::from_real_rows(&[[1.0, 2.0], [3.0, 4.0]]);
        let r = rga(&m, InverseKind::Mp, &InverseOptions::default()).unwrap();
        // ad/(ad−bc) = 4/(4−6)
        assert!((r[(0, 0)].re + 2.0).abs() < 1e-12);
        let re = rga_exact(
            &RationalMatrix::from_i64_rows(&[[1, 2], [3, 4]]),
            InverseKind::Mp,
        )
        .unwrap();
        assert_eq!(re[(0, 0)], rat(-2));
        assert_eq!(re[(0, 1)], rat(3));
        let eye = rga(
            &ComplexMatrix::identity(3),
            InverseKind::Uc,
            &InverseOptions::default(),
        )
        .unwrap();
        assert!(eye.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-14);
    }

    #[test]
    fn rga_needs_nonsingular_for_similarity_kinds() {
        let m = ComplexMatrix::from_real_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        assert!(matches!(
            rga(&m, InverseKind::Drazin, &InverseOptions::default()),
            Err(Error::Singular)
        ));
    }

    #[test]
    fn sc_solves_consistent_system() {
        let a = RationalMatrix::from_i64_rows(&[[4, -1, 2], [7, -2, 3], [-4, 1, -2]]);
        let y = a.mat_vec(&[rat(1), rat(2), ratio(-1, 3)]);
        let sol = solve_linear_model_exact(&a, &y, InverseKind::ScJordan).unwrap();
        assert_eq!(a.mat_vec(&sol), y);
    }

    #[test]
    fn dispatch_respects_backend() {
        let m = Operand::Exact(RationalMatrix::from_i64_rows(&[[2, 0], [0, 0]]));
        let opts = InverseOptions::default();
        let e = drazin_inverse(&m, Backend::Exact, &opts).unwrap();
        assert_eq!(
            e,
            Operand::Exact(RationalMatrix::diag(&[ratio(1, 2), rat(0)]))
        );
        let f = drazin_inverse(&m, Backend::Float, &opts)
            .unwrap()
            .to_float();
        assert!(f.max_abs_diff(&ComplexMatrix::diag_real(&[0.5, 0.0])) < 1e-12);
        assert!(inverse(
            &Operand::Float(m.to_float()),
            InverseKind::Mp,
            Backend::Exact,
            &opts
        )
        .is_err());
        assert!(inverse_exact(&RationalMatrix::identity(2), InverseKind::Uc).is_err());
        assert_eq!(drazin_index(&m, Backend::Exact).unwrap(), 1);
    }
}
