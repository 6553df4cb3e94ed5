use num_complex::Complex64;

use super::eigen::eigenvalues;
use super::matrix::{c, vec_norm, ComplexMatrix, EPS};
use super::svd::{norm2, svd};
use crate::error::{Error, Result};
use crate::exact::JordanBlock;

/// Tolerances for the numerical Jordan decomposition. `None` selects the
/// matrix-dependent default.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct JordanOptions {
    /// Eigenvalues closer than this are treated as one. Default: for a group of
    /// `m` eigenvalues, `n·ε^(1/m)·‖M‖₂` (so `n·√ε·‖M‖₂` for pairs).
    pub cluster_tol: Option<f64>,
    /// Singular values of `(M−λI)ʲ` above this count toward its rank. By
    /// default the rank is placed at the widest singular-value gap among the
    /// ranks a valid Jordan structure allows.
    pub rank_tol: Option<f64>,
}

impl JordanOptions {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("cluster_tol", self.cluster_tol),
            ("rank_tol", self.rank_tol),
        ] {
            if let Some(t) = v {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(Error::InvalidTolerance(format!(
                        "{name} must be positive, got {t}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Clustering radius applied to a prospective group of `size` eigenvalues.
    pub fn cluster_tol_for(&self, n: usize, norm: f64, size: usize) -> f64 {
        self.cluster_tol
            .unwrap_or_else(|| n as f64 * norm * EPS.powf(1.0 / size.max(2) as f64))
    }
}

/// `M ≈ P·J·P⁻¹` computed in floating point, with the achieved residual.
#[derive(Debug, Clone)]
pub struct NumericJordanForm {
    pub p: ComplexMatrix,
    pub blocks: Vec<JordanBlock<Complex64>>,
    /// `‖P·J·P⁻¹ − M‖_max`
    pub residual: f64,
    /// Pairwise clustering radius that was in effect.
    pub cluster_tol: f64,
}

impl NumericJordanForm {
    pub fn n(&self) -> usize {
        self.p.rows()
    }

    pub fn j_matrix(&self) -> ComplexMatrix {
        numeric_jordan_matrix(&self.blocks)
    }

    pub fn p_inverse(&self) -> Result<ComplexMatrix> {
        self.p.inverse()
    }

    pub fn reconstruct(&self) -> Result<ComplexMatrix> {
        Ok(&(&self.p * &self.j_matrix()) * &self.p_inverse()?)
    }
}

pub fn numeric_jordan_matrix(blocks: &[JordanBlock<Complex64>]) -> ComplexMatrix {
    let n: usize = blocks.iter().map(|b| b.size).sum();
    let mut j = ComplexMatrix::zeros(n, n);
    let mut at = 0;
    for b in blocks {
        for k in 0..b.size {
            j[(at + k, at + k)] = b.eigenvalue;
            if k + 1 < b.size {
                j[(at + k, at + k + 1)] = c(1.0);
            }
        }
        at += b.size;
    }
    j
}

/// Groups eigenvalues whose spread is within the clustering radius for the
/// group's size. Larger groups are tried first since a size-`m` block splits
/// its eigenvalue into `m` values about `ε^(1/m)` apart, so its members need
/// not be close pairwise at the size-2 radius. Returns `(mean, size)` sorted
/// by real part, then imaginary part.
pub(crate) fn cluster_eigenvalues(
    ev: &[Complex64],
    opts: &JordanOptions,
    norm: f64,
) -> Vec<(Complex64, usize)> {
    let n = ev.len();
    let mut left: Vec<Complex64> = ev.to_vec();
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    while !left.is_empty() {
        // (members, diameter) of the best candidate: largest size, then tightest
        let mut best: Option<(Vec<usize>, f64)> = None;
        for seed in 0..left.len() {
            let mut order: Vec<usize> = (0..left.len()).collect();
            order.sort_by(|&a, &b| {
                (left[a] - left[seed])
                    .norm()
                    .total_cmp(&(left[b] - left[seed]).norm())
            });
            for m in (1..=left.len()).rev() {
                if best.as_ref().is_some_and(|(g, _)| g.len() > m) {
                    break;
                }
                let members = &order[..m];
                let mut d: f64 = 0.0;
                for (i, &a) in members.iter().enumerate() {
                    for &b in &members[i + 1..] {
                        d = d.max((left[a] - left[b]).norm());
                    }
                }
                if m == 1
                    || (d <= opts.cluster_tol_for(n, norm, m)
                        && !has_outer_gap(
                            &left,
                            members,
                            n as f64 * EPS * norm,
                            opts.cluster_tol_for(n, norm, 2),
                        ))
                {
                    let better = match &best {
                        None => true,
                        Some((g, bd)) => m > g.len() || d < *bd,
                    };
                    if better {
                        best = Some((members.to_vec(), d));
                    }
                    break;
                }
            }
        }
        let (mut members, _) = best.expect("non-empty");
        members.sort_unstable_by(|a, b| b.cmp(a));
        let group: Vec<Complex64> = members.into_iter().map(|i| left.remove(i)).collect();
        let sum: Complex64 = group.iter().sum();
        out.push((sum / group.len() as f64, group.len()));
    }
    out.sort_by(|x, y| x.0.re.total_cmp(&y.0.re).then(x.0.im.total_cmp(&y.0.im)));
    out
}

// A group whose last single-linkage merge is this many times the previous one
// is two clusters, not one.
const MERGE_GAP: f64 = 100.0;

/// Whether `members` (three or more) join as separated subgroups: the largest
/// single-linkage merge height exceeds the next largest by `MERGE_GAP` and is
/// beyond `coincident`, the distance under which two eigenvalues are taken
/// as equal anyway. Heights below `floor` count as `floor`.
fn has_outer_gap(values: &[Complex64], members: &[usize], floor: f64, coincident: f64) -> bool {
    let m = members.len();
    if m < 3 {
        return false;
    }
    // Prim's tree; its edge weights are the single-linkage merge heights
    let mut dist: Vec<f64> = members
        .iter()
        .map(|&b| (values[members[0]] - values[b]).norm())
        .collect();
    let mut done = vec![false; m];
    done[0] = true;
    let mut heights = Vec::with_capacity(m - 1);
    for _ in 1..m {
        let k = (0..m)
            .filter(|&k| !done[k])
            .min_by(|&a, &b| dist[a].total_cmp(&dist[b]))
            .expect("unvisited member");
        done[k] = true;
        heights.push(dist[k].max(floor));
        for t in 0..m {
            if !done[t] {
                dist[t] = dist[t].min((values[members[k]] - values[members[t]]).norm());
            }
        }
    }
    heights.sort_by(f64::total_cmp);
    heights[m - 2] > coincident && heights[m - 2] > MERGE_GAP * heights[m - 3]
}

// Rows of an orthonormal kernel basis smaller than this are treated as zero
// when locating the free coordinates.
const FREE_ROW_TOL: f64 = 1e-8;
// A candidate chain top is independent when this fraction of it survives projection.
const INDEPENDENCE_TOL: f64 = 1e-6;

/// Floating counterpart of the exact decomposition. Eigenvalues are clustered,
/// block sizes come from numeric ranks of `(M−λ̂I)ʲ` (built by repeated
/// multiplication), and chain tops are chosen from the RREF-normalized basis of
/// each kernel so the choice tracks the exact backend. Failure to complete the
/// chains is reported as `ChainFailure`, never patched over.
pub fn numerical_jordan(m: &ComplexMatrix, opts: &JordanOptions) -> Result<NumericJordanForm> {
    let n = m.require_square()?;
    opts.validate()?;
    let norm = norm2(m)?;
    let ev = eigenvalues(m)?;
    let clusters = cluster_eigenvalues(&ev, opts, norm);

    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut blocks = Vec::new();
    for &(lambda, mult) in &clusters {
        let b = m.shifted(lambda)?;
        for chain in cluster_chains(&b, mult, norm, opts)? {
            blocks.push(JordanBlock {
                eigenvalue: lambda,
                size: chain.len(),
            });
            columns.extend(chain);
        }
    }
    let p = ComplexMatrix::from_columns(&columns)?;
    let pf = svd(&p)?;
    let (smax, smin) = (pf.sigma[0], *pf.sigma.last().expect("square"));
    if smin.is_nan() || smin <= n as f64 * EPS * smax {
        return Err(Error::ChainFailure(format!(
            "assembled transform is numerically singular (σmin/σmax = {:e})",
            smin / smax
        )));
    }
    let p_inv = p
        .inverse()
        .map_err(|_| Error::ChainFailure("transform inversion failed".into()))?;
    let j = numeric_jordan_matrix(&blocks);
    let residual = (&(&p * &j) * &p_inv).max_abs_diff(m);
    let gate = EPS.sqrt() * norm * smax * p_inv.max_abs() * n as f64;
    if residual.is_nan() || residual > gate {
        return Err(Error::ChainFailure(format!(
            "decomposition residual {residual:e} exceeds {gate:e}"
        )));
    }
    Ok(NumericJordanForm {
        p,
        blocks,
        residual,
        cluster_tol: opts.cluster_tol_for(n, norm, 2),
    })
}

fn cluster_chains(
    b: &ComplexMatrix,
    mult: usize,
    scale: f64,
    opts: &JordanOptions,
) -> Result<Vec<Vec<Vec<Complex64>>>> {
    let n = b.rows();
    let floor = n - mult;
    let bnorm = norm2(b)?;
    let mut ranks = vec![n];
    // orthonormal kernel bases of B^j, j = 0..
    let mut kernels: Vec<Vec<Vec<Complex64>>> = vec![Vec::new()];
    let mut power = ComplexMatrix::identity(n);
    for j in 1..=mult {
        power = b * &power;
        let f = svd(&power)?;
        let prev = ranks[j - 1];
        // ranks must keep falling, by no more than the previous drop, and reach
        // the floor by the cluster size
        let lo = if j == 1 {
            floor
        } else {
            floor.max(prev.saturating_sub(ranks[j - 2] - prev))
        };
        let hi = if j == mult {
            floor
        } else {
            (prev - 1).max(floor)
        };
        if lo > hi {
            return Err(Error::ChainFailure(format!(
                "rank sequence {ranks:?} cannot reach {floor}"
            )));
        }
        let r = match opts.rank_tol {
            Some(tol) => f.rank_above(tol).clamp(lo, hi),
            None => {
                let level = scale.max(bnorm).powi(j as i32);
                widest_gap(&f.sigma, level, n as f64 * EPS * level, lo, hi)
            }
        };
        ranks.push(r);
        kernels.push((r..n).map(|k| f.v.column(k)).collect());
        if r == floor {
            break;
        }
    }

    let height = ranks.len() - 1;
    let at_least = |j: usize| {
        if j == 0 || j > height {
            0
        } else {
            ranks[j - 1] - ranks[j]
        }
    };
    let mut tops: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for level in (1..=height).rev() {
        let needed = at_least(level) - at_least(level + 1);
        if needed == 0 {
            continue;
        }
        let mut basis: Vec<Vec<Complex64>> = Vec::new();
        for v in &kernels[level - 1] {
            push_orthonormal(&mut basis, v);
        }
        for (len, top) in &tops {
            push_orthonormal(&mut basis, &apply_power(b, top, len - level));
        }
        let mut chosen = 0;
        for cand in canonical_basis(&kernels[level], n)? {
            if chosen == needed {
                break;
            }
            let res = project_out(&basis, &cand);
            if vec_norm(&res) > INDEPENDENCE_TOL * vec_norm(&cand) {
                push_orthonormal(&mut basis, &res);
                tops.push((level, cand));
                chosen += 1;
            }
        }
        if chosen != needed {
            return Err(Error::ChainFailure(format!(
                "found {chosen} of {needed} chain tops of length {level}"
            )));
        }
    }
    Ok(tops
        .into_iter()
        .map(|(len, top)| (0..len).rev().map(|k| apply_power(b, &top, k)).collect())
        .collect())
}

/// The rank `r` in `lo..=hi` with the largest ratio `σ_r / σ_{r+1}` (1-based,
/// `σ_0 = scale`, `σ_{n+1} = 0`). Values are floored at `noise` first so that
/// rounding-level singular values never form a gap among themselves.
fn widest_gap(sigma: &[f64], scale: f64, noise: f64, lo: usize, hi: usize) -> usize {
    let at = |k: usize| -> f64 {
        let v = if k == 0 {
            scale.max(sigma.first().copied().unwrap_or(0.0))
        } else {
            sigma.get(k - 1).copied().unwrap_or(0.0)
        };
        v.max(noise).max(f64::MIN_POSITIVE)
    };
    // first maximum, so ties resolve toward the lower rank
    (lo..=hi).fold(lo, |best, r| {
        if at(r) / at(r + 1) > at(best) / at(best + 1) {
            r
        } else {
            best
        }
    })
}

fn apply_power(b: &ComplexMatrix, v: &[Complex64], k: usize) -> Vec<Complex64> {
    let mut out = v.to_vec();
    for _ in 0..k {
        out = b.mat_vec(&out);
    }
    out
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Two passes of modified Gram-Schmidt against an orthonormal basis.
fn project_out(basis: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
    let mut r = v.to_vec();
    for _ in 0..2 {
        for q in basis {
            let h = dot(q, &r);
            for (ri, qi) in r.iter_mut().zip(q) {
                *ri -= h * qi;
            }
        }
    }
    r
}

fn push_orthonormal(basis: &mut Vec<Vec<Complex64>>, v: &[Complex64]) {
    let r = project_out(basis, v);
    let nr = vec_norm(&r);
    if nr > INDEPENDENCE_TOL * vec_norm(v).max(f64::MIN_POSITIVE) {
        basis.push(r.into_iter().map(|z| z / nr).collect());
    }
}

/// Rewrites a kernel basis in RREF-nullspace normal form: one vector per free
/// coordinate, equal to 1 there and 0 at the other free coordinates. Free
/// coordinates are the rows that are independent of the rows below them.
fn canonical_basis(kernel: &[Vec<Complex64>], n: usize) -> Result<Vec<Vec<Complex64>>> {
    let d = kernel.len();
    if d == 0 {
        return Ok(Vec::new());
    }
    let row = |i: usize| -> Vec<Complex64> { kernel.iter().map(|v| v[i]).collect() };
    let mut free = Vec::with_capacity(d);
    let mut row_basis: Vec<Vec<Complex64>> = Vec::new();
    for i in (0..n).rev() {
        if free.len() == d {
            break;
        }
        let r = project_out(&row_basis, &row(i));
        let nr = vec_norm(&r);
        if nr > FREE_ROW_TOL {
            row_basis.push(r.into_iter().map(|z| z / nr).collect());
            free.push(i);
        }
    }
    if free.len() < d {
        return Err(Error::ChainFailure(
            "kernel basis is numerically rank deficient".into(),
        ));
    }
    free.sort_unstable();
    let nf = ComplexMatrix::from_columns(
        &(0..d)
            .map(|k| free.iter().map(|&i| kernel[k][i]).collect())
            .collect::<Vec<_>>(),
    )?;
    // nf[(a, k)] = kernel[k][free[a]]
    let inv = nf
        .inverse()
        .map_err(|_| Error::ChainFailure("free-coordinate block is singular".into()))?;
    let full = ComplexMatrix::from_columns(kernel)?;
    let canon = &full * &inv;
    Ok((0..d).map(|k| canon.column(k)).collect())
}
