use serde::Serialize;

use crate::error::{Error, Result};
use crate::float::{mp_inverse_with, ComplexMatrix, RankMode};

pub const BALANCE_TOL: f64 = 1e-12;
pub const BALANCE_MAX_ITER: usize = 1000;

/// `M = D·S_core·E` with `D`, `E` positive diagonal.
#[derive(Debug, Clone)]
pub struct UcFactors {
    pub d: Vec<f64>,
    pub e: Vec<f64>,
    pub s_core: ComplexMatrix,
    pub meta: BalanceMeta,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BalanceMeta {
    /// All-zero rows, left at unit scale.
    pub zero_rows: Vec<usize>,
    pub zero_cols: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
}

impl BalanceMeta {
    pub fn degenerate(&self) -> bool {
        !self.zero_rows.is_empty() || !self.zero_cols.is_empty()
    }
}

impl UcFactors {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut out = self.s_core.clone();
        for i in 0..out.rows() {
            for j in 0..out.cols() {
                out[(i, j)] *= self.d[i] * self.e[j];
            }
        }
        out
    }
}

/// Alternating row/column scaling in log space until every nonzero row and
/// column of `|S_core|` has unit geometric mean.
pub fn uc_factors(m: &ComplexMatrix) -> Result<UcFactors> {
    let (rows, cols) = (m.rows(), m.cols());
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyInput);
    }
    let logs: Vec<Option<f64>> = m
        .data()
        .iter()
        .map(|z| {
            if z.norm() > 0.0 {
                Some(z.norm().ln())
            } else {
                None
            }
        })
        .collect();
    let at = |i: usize, j: usize| logs[i * cols + j];
    let row_nz: Vec<Vec<usize>> = (0..rows)
        .map(|i| (0..cols).filter(|&j| at(i, j).is_some()).collect())
        .collect();
    let col_nz: Vec<Vec<usize>> = (0..cols)
        .map(|j| (0..rows).filter(|&i| at(i, j).is_some()).collect())
        .collect();

    let mut x = vec![0.0; rows];
    let mut y = vec![0.0; cols];
    let mut meta = BalanceMeta {
        zero_rows: (0..rows).filter(|&i| row_nz[i].is_empty()).collect(),
        zero_cols: (0..cols).filter(|&j| col_nz[j].is_empty()).collect(),
        ..Default::default()
    };
    for it in 1..=BALANCE_MAX_ITER {
        let mut change: f64 = 0.0;
        for i in 0..rows {
            if row_nz[i].is_empty() {
                continue;
            }
            let v = row_nz[i]
                .iter()
                .map(|&j| at(i, j).unwrap() - y[j])
                .sum::<f64>()
                / row_nz[i].len() as f64;
            change = change.max((v - x[i]).abs());
            x[i] = v;
        }
        for j in 0..cols {
            if col_nz[j].is_empty() {
                continue;
            }
            let v = col_nz[j]
                .iter()
                .map(|&i| at(i, j).unwrap() - x[i])
                .sum::<f64>()
                / col_nz[j].len() as f64;
            change = change.max((v - y[j]).abs());
            y[j] = v;
        }
        meta.iterations = it;
        let scale = x.iter().chain(&y).fold(1.0f64, |a, v| a.max(v.abs()));
        if change <= BALANCE_TOL * scale {
            meta.converged = true;
            break;
        }
    }
    let d: Vec<f64> = x.iter().map(|v| v.exp()).collect();
    let e: Vec<f64> = y.iter().map(|v| v.exp()).collect();
    let mut s_core = m.clone();
    for i in 0..rows {
        for j in 0..cols {
            s_core[(i, j)] /= d[i] * e[j];
        }
    }
    Ok(UcFactors { d, e, s_core, meta })
}

/// `E⁻¹·S_core⁺·D⁻¹`, returned with the balancing it was built from.
pub fn uc_inverse_with(m: &ComplexMatrix, mode: RankMode) -> Result<(ComplexMatrix, UcFactors)> {
    let f = uc_factors(m)?;
    let mut x = mp_inverse_with(&f.s_core, mode)?;
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            x[(i, j)] /= f.e[i] * f.d[j];
        }
    }
    Ok((x, f))
}

pub fn uc_inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(uc_inverse_with(m, RankMode::default())?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_entry() {
        let m = ComplexMatrix::from_real_rows(&[[0.0, 2.0], [0.0, 0.0]]);
        let (x, f) = uc_inverse_with(&m, RankMode::default()).unwrap();
        let want = ComplexMatrix::from_real_rows(&[[0.0, 0.0], [0.5, 0.0]]);
        assert!(x.max_abs_diff(&want) < 1e-14);
        assert!(f.meta.degenerate());
        assert_eq!(f.meta.zero_rows, vec![1]);
        assert_eq!(f.meta.zero_cols, vec![0]);
        assert!((f.s_core[(0, 1)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn factors_reconstruct_and_balance() {
        let m =
            ComplexMatrix::from_real_rows(&[[1.0, 200.0, 3.0], [0.01, 5.0, 0.0], [7.0, 1e3, 9.0]]);
        let f = uc_factors(&m).unwrap();
        assert!(f.meta.converged);
        assert!(f.reconstruct().max_abs_diff(&m) < 1e-10 * m.max_abs());
        for i in 0..3 {
            let nz: Vec<f64> = (0..3)
                .map(|j| f.s_core[(i, j)].norm())
                .filter(|v| *v > 0.0)
                .collect();
            let g = nz.iter().map(|v| v.ln()).sum::<f64>() / nz.len() as f64;
            assert!(g.abs() < 1e-9);
        }
    }

    #[test]
    fn nonsingular_gives_inverse() {
        let m = ComplexMatrix::from_real_rows(&[[4.0, 1.0], [2.0, 3.0]]);
        assert!(uc_inverse(&m).unwrap().max_abs_diff(&m.inverse().unwrap()) < 1e-12);
    }

    #[test]
    fn diagonal_scaling_commutes() {
        let m = ComplexMatrix::from_real_rows(&[[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [1.0, 0.0, 1.0]]);
        let dl = ComplexMatrix::diag_real(&[3.0, 0.2, 7.0]);
        let dr = ComplexMatrix::diag_real(&[0.5, 11.0, 2.0]);
        let lhs = uc_inverse(&(&(&dl * &m) * &dr)).unwrap();
        let rhs = &(&dr.inverse().unwrap() * &uc_inverse(&m).unwrap()) * &dl.inverse().unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-8 * rhs.max_abs());
    }
}
