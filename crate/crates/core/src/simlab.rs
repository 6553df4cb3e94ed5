//! Rotating-Jordan-form experiment: `M(t) = (Q(t)·S)·J·(Q(t)·S)⁻¹` with a fixed
//! defective rank-2 `J`, inverted at every timestep through a numerical Jordan
//! decomposition and compared against the inverse carried by the known
//! construction.

use std::f64::consts::TAU;
use std::io::{Read, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::float::{
    mp_inverse, mp_inverse_fixed_rank, numerical_jordan, svd, ComplexMatrix, JordanOptions,
    Threshold,
};
use crate::geninv::random::seeded;

pub const DEFAULT_STEPS: usize = 300;
pub const DEFAULT_SPIKE_CUTOFF: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "k")]
pub enum Mode {
    /// Moore-Penrose inverse of the computed `J` with the automatic cutoff.
    Threshold,
    /// Invert only the `k` largest singular values of the computed `J`.
    FixedRank(usize),
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub s: ComplexMatrix,
    pub steps: usize,
    pub mode: Mode,
    /// Seed `s` was drawn from, if any.
    pub seed: Option<u64>,
    pub jordan: JordanOptions,
}

impl SimConfig {
    pub fn new(s: ComplexMatrix, steps: usize, mode: Mode) -> Result<Self> {
        let cfg = Self {
            s,
            steps,
            mode,
            seed: None,
            jordan: JordanOptions::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_seed(seed: u64, steps: usize, mode: Mode) -> Result<Self> {
        let mut cfg = Self::new(random_nonsingular_s(seed), steps, mode)?;
        cfg.seed = Some(seed);
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.s.rows() != 3 || self.s.cols() != 3 {
            return Err(Error::InvalidConfig(format!(
                "S must be 3x3, got {}x{}",
                self.s.rows(),
                self.s.cols()
            )));
        }
        if self.steps == 0 {
            return Err(Error::InvalidConfig("steps must be at least 1".into()));
        }
        if self.s.det()?.norm() <= 1e-8 {
            return Err(Error::Singular);
        }
        if let Mode::FixedRank(k) = self.mode {
            if k > 3 {
                return Err(Error::RankOutOfRange { k, max: 3 });
            }
        }
        self.jordan.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimRecord {
    pub t: f64,
    pub err: f64,
    pub chain_failed: bool,
    /// Number of singular values the pseudoinverse step inverted. Not part of
    /// the CSV interface.
    #[serde(skip)]
    pub inverted_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimSummary {
    pub mean_err: f64,
    pub max_err: f64,
    pub spike_count: usize,
    pub spike_cutoff: f64,
    pub chain_failures: usize,
    pub steps: usize,
}

/// The fixed Jordan matrix `[[1,1,0],[0,1,0],[0,0,0]]`.
pub fn system_jordan() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[1.0, 1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
}

/// Its Moore-Penrose inverse: the 2×2 block inverted, the zero block kept.
fn system_jordan_pinv() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[1.0, -1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
}

/// Rotation by `t` about the z axis.
pub fn rotation_z(t: f64) -> ComplexMatrix {
    let (s, c) = t.sin_cos();
    ComplexMatrix::from_real_rows(&[[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
}

fn conjugate(s: &ComplexMatrix, t: f64, inner: &ComplexMatrix) -> Result<ComplexMatrix> {
    let qs = &rotation_z(t) * s;
    let qs_inv = qs.inverse()?;
    Ok(&(&qs * inner) * &qs_inv)
}

pub fn build_system(s: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    conjugate(s, t, &system_jordan())
}

pub fn ground_truth_sc(s: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    conjugate(s, t, &system_jordan_pinv())
}

/// `3×3` integer matrix with entries in `[-9, 9]` and nonzero determinant.
pub fn random_nonsingular_s(seed: u64) -> ComplexMatrix {
    let mut rng = seeded(seed);
    loop {
        let rows: Vec<[f64; 3]> = (0..3)
            .map(|_| std::array::from_fn(|_| rng.random_range(-9i32..=9) as f64))
            .collect();
        let m = ComplexMatrix::from_real_rows(&rows);
        // integer determinant, so |det| ≥ 1 once it is nonzero
        if m.det().is_ok_and(|d| d.norm() >= 0.5) {
            return m;
        }
    }
}

fn pinv_for_mode(m: &ComplexMatrix, mode: Mode) -> Result<(ComplexMatrix, usize)> {
    match mode {
        Mode::Threshold => {
            let f = svd(m)?;
            let r = f.rank_above(f.auto_threshold());
            Ok((mp_inverse(m, Threshold::Auto)?, r))
        }
        Mode::FixedRank(k) => Ok((mp_inverse_fixed_rank(m, k)?, k)),
    }
}

/// One timestep's computed inverse.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub inverse: Option<ComplexMatrix>,
    pub chain_failed: bool,
    pub inverted_rank: usize,
}

/// `P·J⁺·P⁻¹` from the numerical decomposition of `m`. If the chains cannot
/// be built, falls back to `P = I`, `J = M`.
pub fn evaluate_step(m: &ComplexMatrix, mode: Mode, jordan: &JordanOptions) -> Result<StepOutcome> {
    match numerical_jordan(m, jordan) {
        Ok(jf) => {
            let (jp, r) = pinv_for_mode(&jf.j_matrix(), mode)?;
            let x = &(&jf.p * &jp) * &jf.p_inverse()?;
            Ok(StepOutcome {
                inverse: Some(x),
                chain_failed: false,
                inverted_rank: r,
            })
        }
        Err(Error::ChainFailure(_)) => Ok(match pinv_for_mode(m, mode) {
            Ok((x, r)) => StepOutcome {
                inverse: Some(x),
                chain_failed: true,
                inverted_rank: r,
            },
            Err(_) => StepOutcome {
                inverse: None,
                chain_failed: true,
                inverted_rank: 0,
            },
        }),
        Err(e) => Err(e),
    }
}

/// Timesteps `tᵢ = 2πi/steps`, `i = 0..steps`.
pub fn timesteps(steps: usize) -> impl Iterator<Item = f64> {
    (0..steps).map(move |i| TAU * i as f64 / steps as f64)
}

pub fn run_experiment(cfg: &SimConfig) -> Result<Vec<SimRecord>> {
    cfg.validate()?;
    timesteps(cfg.steps)
        .map(|t| {
            let m = build_system(&cfg.s, t)?;
            let truth = ground_truth_sc(&cfg.s, t)?;
            let out = evaluate_step(&m, cfg.mode, &cfg.jordan)?;
            let err = out
                .inverse
                .as_ref()
                .map_or(f64::NAN, |x| x.max_abs_diff(&truth));
            Ok(SimRecord {
                t,
                err,
                chain_failed: out.chain_failed,
                inverted_rank: out.inverted_rank,
            })
        })
        .collect()
}

/// Mean and max skip records with no error value (failed chains with no
/// fallback result).
pub fn summarize(records: &[SimRecord], spike_cutoff: f64) -> Result<SimSummary> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let errs: Vec<f64> = records
        .iter()
        .map(|r| r.err)
        .filter(|e| !e.is_nan())
        .collect();
    let mean_err = if errs.is_empty() {
        f64::NAN
    } else {
        errs.iter().sum::<f64>() / errs.len() as f64
    };
    let max_err = errs
        .iter()
        .copied()
        .fold(if errs.is_empty() { f64::NAN } else { 0.0 }, f64::max);
    Ok(SimSummary {
        mean_err,
        max_err,
        spike_count: errs.iter().filter(|&&e| e > spike_cutoff).count(),
        spike_cutoff,
        chain_failures: records.iter().filter(|r| r.chain_failed).count(),
        steps: records.len(),
    })
}

/// Header `t,err,chain_failed`; floats in shortest round-trip form.
pub fn write_csv<W: Write>(records: &[SimRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<SimRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let headers = rd.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["t", "err", "chain_failed"] {
        return Err(Error::Parse(format!("unexpected csv header {:?}", headers)));
    }
    rd.deserialize().map(|r| r.map_err(Error::from)).collect()
}
