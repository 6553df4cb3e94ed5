//! Command-line front end. Every command prints one JSON document on standard
//! output; failures print a one-line JSON reason on standard error and set the
//! exit code (2 usage or input, 3 irrational spectrum, 4 chain failure).

pub mod io;

use std::ffi::OsString;
use std::fs::File;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{exact_jordan, exact_mp_inverse, rank, ExactJordanForm, RationalMatrix};
use crate::float::{
    mp_inverse_with, numeric_rank, numerical_jordan, ComplexMatrix, JordanOptions, RankMode,
    Threshold,
};
use crate::geninv::{
    drazin_from_jordan, drazin_from_numeric, penrose_check, penrose_check_exact, rga, rga_exact,
    sc_inverse_from_jordan, sc_inverse_from_numeric, sc_inverse_symmetric_from,
    sc_is_basis_independent, uc_inverse_with, InverseKind, InverseOptions, BALANCE_MAX_ITER,
    BALANCE_TOL,
};
use crate::simlab::{self, Mode, SimConfig, DEFAULT_SPIKE_CUTOFF, DEFAULT_STEPS};
use crate::verify::{self, Suite};
use io::{
    complex_json, exact_matrix_json, float_matrix_json, rational_json, read_matrix_file,
    MatrixInput,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IRRATIONAL: i32 = 3;
pub const EXIT_CHAIN_FAILURE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "scinv",
    version,
    about = "Generalized matrix inverses with an exact rational oracle"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a generalized inverse and its diagnostics.
    Inv(InvArgs),
    /// Jordan decomposition `M = P·J·P⁻¹`.
    Jordan(JordanArgs),
    /// Relative gain array `M ∘ inv(M)ᵀ`.
    Rga(RgaArgs),
    /// Rotating-system experiment; writes a `t,err,chain_failed` CSV.
    Simulate(SimulateArgs),
    /// Seeded property batteries; exit 0 when every check passes.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Auto,
    Exact,
    Float,
}

#[derive(Debug, Args)]
pub struct Tolerances {
    /// Eigenvalue clustering radius (default: adaptive).
    #[arg(long)]
    pub cluster_tol: Option<f64>,
    /// Singular-value cutoff for Jordan rank decisions (default: widest gap).
    #[arg(long)]
    pub rank_tol: Option<f64>,
}

impl Tolerances {
    fn jordan(&self) -> Result<JordanOptions> {
        let o = JordanOptions {
            cluster_tol: self.cluster_tol,
            rank_tol: self.rank_tol,
        };
        o.validate()?;
        Ok(o)
    }

    fn echo(&self) -> Value {
        let show = |v: Option<f64>| v.map_or(json!("auto"), |t| json!(t));
        json!({ "cluster_tol": show(self.cluster_tol), "rank_tol": show(self.rank_tol) })
    }
}

#[derive(Debug, Args)]
pub struct InvArgs {
    pub file: PathBuf,
    /// mp, uc, drazin, sc or sc-sym
    #[arg(long, value_parser = parse_kind)]
    pub kind: InverseKind,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    pub backend: BackendArg,
    /// auto, fixed:K or threshold:T
    #[arg(long, default_value = "auto", value_parser = parse_rank_mode)]
    pub rank_mode: RankMode,
    #[command(flatten)]
    pub tol: Tolerances,
}

#[derive(Debug, Args)]
pub struct JordanArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    pub backend: BackendArg,
    #[command(flatten)]
    pub tol: Tolerances,
}

#[derive(Debug, Args)]
pub struct RgaArgs {
    pub file: PathBuf,
    /// mp or uc
    #[arg(long, default_value = "mp", value_parser = parse_rga_kind)]
    pub kind: InverseKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Threshold,
    FixedRank,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("system").required(true).args(["seed", "s_file"])))]
pub struct SimulateArgs {
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::FixedRank)]
    pub mode: ModeArg,
    /// Singular values kept in fixed-rank mode.
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
    /// Draw `S` from this seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Read `S` from a 3×3 matrix file.
    #[arg(long)]
    pub s_file: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SPIKE_CUTOFF)]
    pub spike_cutoff: f64,
    #[command(flatten)]
    pub tol: Tolerances,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// penrose, similarity, unitary, diagonal, drazin or all
    #[arg(long, default_value = "all", value_parser = parse_suite)]
    pub suite: SuiteArg,
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct SuiteArg(pub String, pub Vec<Suite>);

fn parse_kind(s: &str) -> std::result::Result<InverseKind, String> {
    s.parse::<InverseKind>().map_err(|e| e.to_string())
}

fn parse_rga_kind(s: &str) -> std::result::Result<InverseKind, String> {
    match parse_kind(s)? {
        k @ (InverseKind::Mp | InverseKind::Uc) => Ok(k),
        k => Err(format!("rga supports mp and uc, not {k}")),
    }
}

fn parse_suite(s: &str) -> std::result::Result<SuiteArg, String> {
    Suite::parse(s)
        .map(|v| SuiteArg(s.to_string(), v))
        .map_err(|e| e.to_string())
}

/// `auto`, `fixed:K` or `threshold:T`.
pub fn parse_rank_mode(s: &str) -> std::result::Result<RankMode, String> {
    match s.split_once(':') {
        None if s == "auto" => Ok(RankMode::Threshold(Threshold::Auto)),
        Some(("fixed", k)) => k
            .parse()
            .map(RankMode::Fixed)
            .map_err(|_| format!("invalid rank in {s:?}")),
        Some(("threshold", t)) => match t.parse::<f64>() {
            Ok(v) if v >= 0.0 && v.is_finite() => Ok(RankMode::Threshold(Threshold::Value(v))),
            _ => Err(format!("invalid threshold in {s:?}")),
        },
        _ => Err(format!("expected auto, fixed:K or threshold:T, got {s:?}")),
    }
}

pub fn format_rank_mode(m: RankMode) -> String {
    match m {
        RankMode::Threshold(Threshold::Auto) => "auto".into(),
        RankMode::Threshold(Threshold::Value(t)) => format!("threshold:{t}"),
        RankMode::Fixed(k) => format!("fixed:{k}"),
    }
}

fn error_code(e: &Error) -> (i32, &'static str) {
    match e {
        Error::IrrationalSpectrum => (EXIT_IRRATIONAL, "irrational-spectrum"),
        Error::ChainFailure(_) => (EXIT_CHAIN_FAILURE, "chain-failure"),
        Error::Parse(_) => (EXIT_USAGE, "parse"),
        Error::Io(_) => (EXIT_USAGE, "io"),
        Error::NotSquare { .. } => (EXIT_USAGE, "not-square"),
        Error::ShapeMismatch(_) => (EXIT_USAGE, "shape-mismatch"),
        Error::BadDimensions { .. } => (EXIT_USAGE, "bad-dimensions"),
        Error::NonFinite { .. } => (EXIT_USAGE, "non-finite"),
        Error::RankOutOfRange { .. } => (EXIT_USAGE, "rank-out-of-range"),
        Error::Singular => (EXIT_USAGE, "singular"),
        Error::InvalidTolerance(_) => (EXIT_USAGE, "invalid-tolerance"),
        Error::InvalidConfig(_) => (EXIT_USAGE, "invalid-config"),
        Error::EmptyInput => (EXIT_USAGE, "empty-input"),
        Error::Unsupported { .. } => (EXIT_USAGE, "unsupported"),
    }
}

fn report_error(code: &str, message: &str) {
    eprintln!("{}", json!({ "error": code, "message": message }));
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("usage error");
            report_error("usage", first.trim_start_matches("error: "));
            return EXIT_USAGE;
        }
    };
    match execute(&cli.command) {
        Ok((out, code)) => {
            use std::io::Write;
            // a closed pipe downstream is not an error of the command
            let _ = writeln!(std::io::stdout().lock(), "{out}");
            code
        }
        Err(e) => {
            let (code, name) = error_code(&e);
            report_error(name, &e.to_string());
            code
        }
    }
}

pub fn execute(cmd: &Command) -> Result<(Value, i32)> {
    match cmd {
        Command::Inv(a) => Ok((cmd_inv(a)?, EXIT_OK)),
        Command::Jordan(a) => Ok((cmd_jordan(a)?, EXIT_OK)),
        Command::Rga(a) => Ok((cmd_rga(a)?, EXIT_OK)),
        Command::Simulate(a) => Ok((cmd_simulate(a)?, EXIT_OK)),
        Command::Verify(a) => cmd_verify(a),
    }
}

enum Chosen {
    Exact(RationalMatrix, Option<ExactJordanForm>),
    Float(ComplexMatrix),
}

fn needs_jordan(kind: InverseKind) -> bool {
    !matches!(kind, InverseKind::Mp | InverseKind::Uc)
}

/// Auto picks the exact backend for exact input when the kind has one and,
/// for Jordan-based kinds, the spectrum is rational.
fn choose_backend(
    input: &MatrixInput,
    kind: InverseKind,
    backend: BackendArg,
    flags: &mut Vec<String>,
) -> Result<Chosen> {
    match (backend, input) {
        (BackendArg::Float, _) => Ok(Chosen::Float(input.to_float())),
        (BackendArg::Exact, MatrixInput::Float { .. }) => Err(Error::Unsupported {
            op: "exact backend",
            what: "floating-point input".into(),
        }),
        (BackendArg::Exact, MatrixInput::Exact(_)) if !kind.has_exact_backend() => {
            Err(Error::Unsupported {
                op: "exact backend",
                what: kind.to_string(),
            })
        }
        (BackendArg::Exact, MatrixInput::Exact(m)) => {
            let jf = if needs_jordan(kind) {
                Some(exact_jordan(m)?)
            } else {
                None
            };
            Ok(Chosen::Exact(m.clone(), jf))
        }
        (BackendArg::Auto, MatrixInput::Float { m, .. }) => Ok(Chosen::Float(m.clone())),
        (BackendArg::Auto, MatrixInput::Exact(m)) => {
            if !kind.has_exact_backend() {
                flags.push("no-exact-backend".into());
                return Ok(Chosen::Float(input.to_float()));
            }
            if !needs_jordan(kind) {
                return Ok(Chosen::Exact(m.clone(), None));
            }
            match exact_jordan(m) {
                Ok(jf) => Ok(Chosen::Exact(m.clone(), Some(jf))),
                Err(Error::IrrationalSpectrum) => {
                    flags.push("irrational-spectrum".into());
                    Ok(Chosen::Float(input.to_float()))
                }
                Err(e) => Err(e),
            }
        }
    }
}

fn cmd_inv(a: &InvArgs) -> Result<Value> {
    let input = read_matrix_file(&a.file)?;
    let opts = InverseOptions {
        rank_mode: a.rank_mode,
        jordan: a.tol.jordan()?,
    };
    let (rows, cols) = match &input {
        MatrixInput::Exact(m) => (m.rows(), m.cols()),
        MatrixInput::Float { m, .. } => (m.rows(), m.cols()),
    };
    if a.kind.requires_square() && rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let mut flags = Vec::new();
    let mut tolerances = a.tol.echo();
    tolerances["rank_mode"] = json!(format_rank_mode(a.rank_mode));
    if a.kind == InverseKind::Uc {
        tolerances["uc_balance_tol"] = json!(BALANCE_TOL);
        tolerances["uc_balance_max_iter"] = json!(BALANCE_MAX_ITER);
    }
    let (backend, result, diagnostics) =
        match choose_backend(&input, a.kind, a.backend, &mut flags)? {
            Chosen::Exact(m, jf) => {
                let x = match (a.kind, &jf) {
                    (InverseKind::Mp, _) => exact_mp_inverse(&m),
                    (InverseKind::Drazin, Some(jf)) => drazin_from_jordan(jf),
                    (InverseKind::ScJordan, Some(jf)) => {
                        if !sc_is_basis_independent(&jf.blocks, |q| q.is_zero()) {
                            flags.push("basis-dependent".into());
                        }
                        sc_inverse_from_jordan(jf)
                    }
                    _ => unreachable!("exact backend chosen only for exact kinds"),
                };
                let rep = penrose_check_exact(&m, &x)?;
                let (rank_in, rank_out) = (rank(&m), rank(&x));
                if rank_out < rank_in {
                    flags.push("rank-reduced".into());
                }
                let mut d = json!({
                    "residuals": {
                        "axiom1": rational_json(&rep.residual_axiom1),
                        "axiom2": rational_json(&rep.residual_axiom2),
                    },
                    "rank_in": rank_in,
                    "rank_out": rank_out,
                    "flags": flags,
                });
                if let Some(jf) = &jf {
                    d["jordan_residual"] = rational_json(&jf.reconstruct().try_sub(&m)?.max_abs());
                }
                ("exact", exact_matrix_json(&x), d)
            }
            Chosen::Float(m) => {
                let mut jordan_residual = None;
                let x = match a.kind {
                    InverseKind::Mp => mp_inverse_with(&m, opts.rank_mode)?,
                    InverseKind::Uc => {
                        let (x, f) = uc_inverse_with(&m, opts.rank_mode)?;
                        if !f.meta.zero_rows.is_empty() {
                            flags.push(format!("uc-zero-rows:{:?}", f.meta.zero_rows));
                        }
                        if !f.meta.zero_cols.is_empty() {
                            flags.push(format!("uc-zero-cols:{:?}", f.meta.zero_cols));
                        }
                        if !f.meta.converged {
                            flags.push("uc-balance-not-converged".into());
                        }
                        x
                    }
                    kind => {
                        let nj = numerical_jordan(&m, &opts.jordan)?;
                        jordan_residual = Some(nj.residual);
                        tolerances["cluster_tol_used"] = json!(nj.cluster_tol);
                        match kind {
                            InverseKind::Drazin => drazin_from_numeric(&nj)?,
                            InverseKind::ScJordan => {
                                let zero = nj.cluster_tol;
                                if !sc_is_basis_independent(&nj.blocks, |z| z.norm() <= zero) {
                                    flags.push("basis-dependent".into());
                                }
                                sc_inverse_from_numeric(&nj, opts.rank_mode)?
                            }
                            _ => sc_inverse_symmetric_from(&nj, opts.rank_mode)?,
                        }
                    }
                };
                let rep = penrose_check(&m, &x)?;
                let (rank_in, rank_out) = (numeric_rank(&m)?, numeric_rank(&x)?);
                if rank_out < rank_in {
                    flags.push("rank-reduced".into());
                }
                let mut d = json!({
                    "residuals": { "axiom1": rep.residual_axiom1, "axiom2": rep.residual_axiom2 },
                    "rank_in": rank_in,
                    "rank_out": rank_out,
                    "flags": flags,
                });
                if let Some(r) = jordan_residual {
                    d["jordan_residual"] = json!(r);
                }
                ("float", float_matrix_json(&x, input.is_complex()), d)
            }
        };
    Ok(json!({
        "kind": a.kind,
        "backend": backend,
        "result": result,
        "diagnostics": diagnostics,
        "tolerances": tolerances,
    }))
}

fn cmd_jordan(a: &JordanArgs) -> Result<Value> {
    let input = read_matrix_file(&a.file)?;
    let jopts = a.tol.jordan()?;
    let mut flags = Vec::new();
    let mut tolerances = a.tol.echo();
    let chosen = choose_backend(&input, InverseKind::ScJordan, a.backend, &mut flags)?;
    let out = match chosen {
        Chosen::Exact(m, jf) => {
            let jf = jf.expect("jordan computed for exact backend");
            let blocks: Vec<Value> = jf
                .blocks
                .iter()
                .map(|b| json!([rational_json(&b.eigenvalue), b.size]))
                .collect();
            json!({
                "backend": "exact",
                "blocks": blocks,
                "P": exact_matrix_json(&jf.p),
                "residual": rational_json(&jf.reconstruct().try_sub(&m)?.max_abs()),
            })
        }
        Chosen::Float(m) => {
            let nj = numerical_jordan(&m, &jopts)?;
            tolerances["cluster_tol_used"] = json!(nj.cluster_tol);
            let complex = input.is_complex();
            let blocks: Vec<Value> = nj
                .blocks
                .iter()
                .map(|b| json!([complex_json(b.eigenvalue, complex), b.size]))
                .collect();
            json!({
                "backend": "float",
                "blocks": blocks,
                "P": float_matrix_json(&nj.p, complex),
                "residual": nj.residual,
            })
        }
    };
    let mut out = out;
    out["flags"] = json!(flags);
    out["tolerances"] = tolerances;
    Ok(out)
}

fn cmd_rga(a: &RgaArgs) -> Result<Value> {
    let input = read_matrix_file(&a.file)?;
    match (&input, a.kind) {
        (MatrixInput::Exact(m), InverseKind::Mp) => Ok(exact_matrix_json(&rga_exact(m, a.kind)?)),
        _ => {
            let g = rga(&input.to_float(), a.kind, &InverseOptions::default())?;
            Ok(float_matrix_json(&g, input.is_complex()))
        }
    }
}

fn cmd_simulate(a: &SimulateArgs) -> Result<Value> {
    let mode = match a.mode {
        ModeArg::Threshold => Mode::Threshold,
        ModeArg::FixedRank => Mode::FixedRank(a.rank),
    };
    if !(a.spike_cutoff > 0.0 && a.spike_cutoff.is_finite()) {
        return Err(Error::InvalidConfig("spike cutoff must be positive".into()));
    }
    let mut cfg = match (&a.s_file, a.seed) {
        (Some(path), _) => {
            let s = read_matrix_file(path)?.to_float();
            SimConfig::new(s, a.steps, mode)?
        }
        (None, Some(seed)) => SimConfig::from_seed(seed, a.steps, mode)?,
        (None, None) => return Err(Error::InvalidConfig("need --seed or --s-file".into())),
    };
    cfg.jordan = a.tol.jordan()?;
    let records = simlab::run_experiment(&cfg)?;
    if let Some(path) = &a.out {
        let f = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        simlab::write_csv(&records, f)?;
    }
    let summary = simlab::summarize(&records, a.spike_cutoff)?;
    Ok(json!({
        "steps": cfg.steps,
        "mode": cfg.mode,
        "seed": cfg.seed,
        "s": float_matrix_json(&cfg.s, false),
        "csv": a.out.as_ref().map(|p| p.display().to_string()),
        "summary": summary,
        "tolerances": a.tol.echo(),
    }))
}

fn cmd_verify(a: &VerifyArgs) -> Result<(Value, i32)> {
    let checks = verify::run_suites(&a.suite.1, a.trials as usize, a.seed)?;
    let passed = checks.iter().all(|c| c.passed);
    let out = json!({
        "suite": a.suite.0,
        "trials": a.trials,
        "seed": a.seed,
        "passed": passed,
        "checks": checks,
    });
    Ok((out, if passed { EXIT_OK } else { EXIT_FAILED }))
}
