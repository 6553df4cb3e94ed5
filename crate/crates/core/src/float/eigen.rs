use nalgebra::linalg::Schur;
use num_complex::Complex64;

use super::matrix::{ComplexMatrix, EPS};
use crate::error::{Error, Result};

// Deflation tolerances tried in turn. With the tightest one the shifted QR
// can stall on clustered eigenvalues and never deflate.
const DEFLATION_STEPS: [f64; 4] = [1.0, 4.0, 16.0, 64.0];

/// All `n` eigenvalues with multiplicity, read from the diagonal of a complex
/// Schur form (Hessenberg reduction followed by shifted QR).
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = m.require_square()?;
    let max_iter = 1000 + 100 * n;
    for k in DEFLATION_STEPS {
        if let Some(schur) = Schur::try_new(m.to_nalgebra(), k * EPS, max_iter) {
            let (_, t) = schur.unpack();
            return Ok((0..n).map(|i| t[(i, i)]).collect());
        }
    }
    Err(Error::ChainFailure(
        "schur iteration did not converge".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<f64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re));
        v.into_iter().map(|z| z.re).collect()
    }

    #[test]
    fn diagonal_and_nilpotent() {
        let d = ComplexMatrix::diag_real(&[2.0, 1.0]);
        let ev = sorted_re(eigenvalues(&d).unwrap());
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 2.0).abs() < 1e-14);
        let n = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(eigenvalues(&n).unwrap().iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn rotation_has_complex_pair() {
        let r = ComplexMatrix::from_real_rows(&[[0.0, -1.0], [1.0, 0.0]]);
        let mut ev = eigenvalues(&r).unwrap();
        ev.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((ev[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
        assert!(eigenvalues(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn stalled_deflation_retries() {
        // tight deflation never converges on this one
        let m = crate::exact::RationalMatrix::new(
            5,
            5,
            [
                "1", "14/5", "2/5", "-2", "12/5", "12", "141/10", "-147/10", "-21/2", "159/5",
                "-12", "-187/10", "149/10", "29/2", "-183/5", "0", "0", "0", "1", "0", "-12",
                "-101/6", "85/6", "79/6", "-34",
            ]
            .iter()
            .map(|s| crate::exact::parse_rational(s).unwrap())
            .collect(),
        )
        .unwrap();
        let ev = sorted_re(eigenvalues(&ComplexMatrix::from_rational(&m)).unwrap());
        let want = [-3.0, -3.0, 1.0, 1.0, 1.0];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).abs() < 1e-6);
        }
    }
}
