use num_complex::Complex64;

use super::matrix::{c, ComplexMatrix, EPS};
use crate::error::{Error, Result};

/// Thin SVD `M = U·diag(σ)·V*`, `σ` descending. `U` is `m×k`, `V` is `n×k`
/// with `k = min(m, n)`; both have orthonormal columns.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

impl SvdFactors {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::diag_real(&self.sigma);
        &(&self.u * &d) * &self.v.adjoint()
    }

    /// Default cutoff `max(m, n)·ε·σ₁`.
    pub fn auto_threshold(&self) -> f64 {
        self.u.rows().max(self.v.rows()) as f64 * EPS * self.sigma.first().copied().unwrap_or(0.0)
    }

    pub fn rank_above(&self, tol: f64) -> usize {
        self.sigma.iter().filter(|&&s| s > tol).count()
    }

    /// `V·diag(inv)·U*` where `inv[i]` is the reciprocal to use for `σᵢ` (or 0).
    fn pseudo(&self, keep: impl Fn(usize, f64) -> bool) -> ComplexMatrix {
        let inv: Vec<f64> = self
            .sigma
            .iter()
            .enumerate()
            .map(|(i, &s)| if keep(i, s) { 1.0 / s } else { 0.0 })
            .collect();
        let mut vd = self.v.clone();
        for j in 0..vd.cols() {
            for i in 0..vd.rows() {
                vd[(i, j)] *= c(inv[j]);
            }
        }
        &vd * &self.u.adjoint()
    }
}

pub fn svd(m: &ComplexMatrix) -> Result<SvdFactors> {
    let (u, raw, v) = if m.rows() >= m.cols() {
        jacobi_svd(m)?
    } else {
        let (u, s, v) = jacobi_svd(&m.adjoint())?;
        (v, s, u)
    };

    // stable sort by descending value keeps index order on ties
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| raw[b].total_cmp(&raw[a]));
    let sigma = order.iter().map(|&i| raw[i].max(0.0)).collect();
    let pick = |mat: &ComplexMatrix| {
        let cols: Vec<Vec<Complex64>> = order.iter().map(|&j| mat.column(j)).collect();
        ComplexMatrix::from_columns(&cols).expect("non-empty factor")
    };
    Ok(SvdFactors {
        u: pick(&u),
        sigma,
        v: pick(&v),
    })
}

/// Cutoff policy for which singular values get inverted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    /// `max(m, n)·ε·σ₁`
    Auto,
    Value(f64),
}

/// How the Moore-Penrose step decides which singular values are nonzero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RankMode {
    Threshold(Threshold),
    /// Invert exactly the `k` largest singular values.
    Fixed(usize),
}

impl Default for RankMode {
    fn default() -> Self {
        RankMode::Threshold(Threshold::Auto)
    }
}

pub fn mp_inverse(m: &ComplexMatrix, threshold: Threshold) -> Result<ComplexMatrix> {
    let f = svd(m)?;
    let tol = match threshold {
        Threshold::Auto => f.auto_threshold(),
        Threshold::Value(t) if t >= 0.0 && t.is_finite() => t,
        Threshold::Value(t) => return Err(Error::InvalidTolerance(format!("threshold {t}"))),
    };
    Ok(f.pseudo(|_, s| s > tol && s > 0.0))
}

const JACOBI_MAX_SWEEPS: usize = 80;
const TINY_COLUMN: f64 = f64::MIN_POSITIVE / EPS;

/// One-sided (Hestenes) Jacobi SVD of a tall matrix (`rows ≥ cols`): columns
/// are rotated pairwise until mutually orthogonal, so `A·V = U·diag(σ)`.
/// Small singular values come out with high relative accuracy.
fn jacobi_svd(m: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<f64>, ComplexMatrix)> {
    let (rows, cols) = (m.rows(), m.cols());
    // power-of-two scaling to a unit max entry is exact and keeps the column
    // norms clear of underflow
    let max = m.max_abs();
    let scale = if max > 0.0 {
        2f64.powi(max.log2().round() as i32)
    } else {
        1.0
    };
    let mut a: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| m.column(j).into_iter().map(|z| z / scale).collect())
        .collect();
    let mut v: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| {
            (0..cols)
                .map(|i| c(if i == j { 1.0 } else { 0.0 }))
                .collect()
        })
        .collect();
    let dot = |x: &[Complex64], y: &[Complex64]| -> Complex64 {
        x.iter().zip(y).map(|(p, q)| p.conj() * q).sum()
    };
    let norm_sq = |x: &[Complex64]| -> f64 { x.iter().map(|z| z.norm_sqr()).sum() };

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = norm_sq(&a[p]);
                let beta = norm_sq(&a[q]);
                let gamma = dot(&a[p], &a[q]);
                let g = gamma.norm();
                // columns this small carry no relative precision to orthogonalize
                if alpha.min(beta) < TINY_COLUMN
                    || g <= rows as f64 * EPS * alpha.sqrt() * beta.sqrt()
                {
                    continue;
                }
                rotated = true;
                // rotate column q's phase so the cross term is real and positive
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for cols_of in [&mut a, &mut v] {
                    let (lo, hi) = cols_of.split_at_mut(q);
                    for (xp, xq) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                        let yq = *xq * phase;
                        let np = *xp * cs - yq * sn;
                        *xq = *xp * sn + yq * cs;
                        *xp = np;
                    }
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::InvalidConfig("svd did not converge".into()));
    }

    // columns left unrotated as tiny count as zero; their U columns come from
    // the completion
    let sigma: Vec<f64> = a
        .iter()
        .map(|col| {
            let sq = norm_sq(col);
            if sq < TINY_COLUMN {
                0.0
            } else {
                sq.sqrt()
            }
        })
        .collect();
    let mut u: Vec<Option<Vec<Complex64>>> = a
        .iter()
        .zip(&sigma)
        .map(|(col, &s)| (s > 0.0).then(|| col.iter().map(|z| z / s).collect()))
        .collect();
    let sigma: Vec<f64> = sigma.into_iter().map(|s| s * scale).collect();
    let mut basis: Vec<Vec<Complex64>> = u.iter().flatten().cloned().collect();
    for slot in u.iter_mut().filter(|s| s.is_none()) {
        // the standard basis vector with the largest residual; some residual
        // has norm at least 1/√rows
        let best = (0..rows)
            .map(|k| {
                let mut e = vec![c(0.0); rows];
                e[k] = c(1.0);
                for _ in 0..2 {
                    for b in &basis {
                        let h = dot(b, &e);
                        for (ei, bi) in e.iter_mut().zip(b) {
                            *ei -= h * bi;
                        }
                    }
                }
                e
            })
            .max_by(|x, y| norm_sq(x).total_cmp(&norm_sq(y)));
        if let Some(e) = best {
            let ne = norm_sq(&e).sqrt();
            if ne > 0.25 / (rows as f64).sqrt() {
                let unit: Vec<Complex64> = e.iter().map(|z| z / ne).collect();
                basis.push(unit.clone());
                *slot = Some(unit);
            }
        }
    }
    let u_cols: Vec<Vec<Complex64>> = u
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidConfig("svd left basis could not be completed".into()))?;
    Ok((
        ComplexMatrix::from_columns(&u_cols)?,
        sigma,
        ComplexMatrix::from_columns(&v)?,
    ))
}

/// Inverts the `k` largest singular values and zeroes the rest, whatever their size.
pub fn mp_inverse_fixed_rank(m: &ComplexMatrix, k: usize) -> Result<ComplexMatrix> {
    let max = m.rows().min(m.cols());
    if k > max {
        return Err(Error::RankOutOfRange { k, max });
    }
    let f = svd(m)?;
    if f.sigma.iter().take(k).any(|&s| s == 0.0) {
        return Err(Error::Singular);
    }
    Ok(f.pseudo(|i, _| i < k))
}

pub fn mp_inverse_with(m: &ComplexMatrix, mode: RankMode) -> Result<ComplexMatrix> {
    match mode {
        RankMode::Threshold(t) => mp_inverse(m, t),
        RankMode::Fixed(k) => mp_inverse_fixed_rank(m, k),
    }
}

/// Numeric rank with the `max(m, n)·ε·σ₁` cutoff.
pub fn numeric_rank(m: &ComplexMatrix) -> Result<usize> {
    let f = svd(m)?;
    Ok(f.rank_above(f.auto_threshold()))
}

/// Largest singular value.
pub fn norm2(m: &ComplexMatrix) -> Result<f64> {
    Ok(svd(m)?.sigma.first().copied().unwrap_or(0.0))
}

/// `σ₁ / σₙ`; infinite for singular input.
pub fn condition_number(m: &ComplexMatrix) -> Result<f64> {
    let f = svd(m)?;
    let smax = f.sigma.first().copied().unwrap_or(0.0);
    let smin = f.sigma.last().copied().unwrap_or(0.0);
    Ok(if smin == 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    })
}
