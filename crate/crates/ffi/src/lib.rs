//! C ABI over the `scinv` toolkit.
//!
//! Matrices cross the boundary as opaque `ScinvMatrix` handles. Every fallible
//! call returns a `ScinvStatus`; on failure a description is available from
//! `scinv_last_error_message` on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use scinv::cli::io::{exact_matrix_json, float_matrix_json, parse_matrix, MatrixInput};
use scinv::exact::{exact_jordan, RationalMatrix};
use scinv::float::{ComplexMatrix, JordanOptions, RankMode, Threshold};
use scinv::geninv::{self, penrose_check, InverseKind, InverseOptions};
use scinv::Error;

/// Outcome of a call. Anything but `Ok` leaves outputs untouched.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScinvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    NotSquare = 4,
    Singular = 5,
    IrrationalSpectrum = 6,
    ChainFailure = 7,
    Unsupported = 8,
    /// A Rust panic was caught at the boundary.
    Internal = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScinvKind {
    Mp = 0,
    Uc = 1,
    Drazin = 2,
    ScJordan = 3,
    ScSymmetric = 4,
}

impl From<ScinvKind> for InverseKind {
    fn from(k: ScinvKind) -> Self {
        match k {
            ScinvKind::Mp => InverseKind::Mp,
            ScinvKind::Uc => InverseKind::Uc,
            ScinvKind::Drazin => InverseKind::Drazin,
            ScinvKind::ScJordan => InverseKind::ScJordan,
            ScinvKind::ScSymmetric => InverseKind::ScSymmetric,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScinvBackend {
    /// Exact when the input is exact and the kind allows it, else float.
    Auto = 0,
    Exact = 1,
    Float = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScinvRankMode {
    /// `max(m, n)·ε·σ₁` cutoff
    Auto = 0,
    /// keep `rank` singular values
    Fixed = 1,
    /// cutoff at `threshold`
    Threshold = 2,
}

/// Numerical options for the float backend. Non-positive tolerances select
/// the defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ScinvOptions {
    pub rank_mode: ScinvRankMode,
    pub rank: usize,
    pub threshold: f64,
    pub cluster_tol: f64,
    pub rank_tol: f64,
}

impl Default for ScinvOptions {
    fn default() -> Self {
        Self {
            rank_mode: ScinvRankMode::Auto,
            rank: 0,
            threshold: 0.0,
            cluster_tol: 0.0,
            rank_tol: 0.0,
        }
    }
}

impl ScinvOptions {
    fn to_inverse_options(self) -> Result<InverseOptions, Error> {
        let rank_mode = match self.rank_mode {
            ScinvRankMode::Auto => RankMode::Threshold(Threshold::Auto),
            ScinvRankMode::Fixed => RankMode::Fixed(self.rank),
            ScinvRankMode::Threshold if self.threshold >= 0.0 && self.threshold.is_finite() => {
                RankMode::Threshold(Threshold::Value(self.threshold))
            }
            ScinvRankMode::Threshold => {
                return Err(Error::InvalidTolerance(format!(
                    "threshold {}",
                    self.threshold
                )))
            }
        };
        let pos = |v: f64| (v > 0.0).then_some(v);
        let jordan = JordanOptions {
            cluster_tol: pos(self.cluster_tol),
            rank_tol: pos(self.rank_tol),
        };
        jordan.validate()?;
        Ok(InverseOptions { rank_mode, jordan })
    }
}

/// Opaque matrix, exact rational or complex floating point.
pub struct ScinvMatrix {
    inner: MatrixInput,
}

impl ScinvMatrix {
    fn boxed(inner: MatrixInput) -> *mut ScinvMatrix {
        Box::into_raw(Box::new(ScinvMatrix { inner }))
    }

    fn shape(&self) -> (usize, usize) {
        match &self.inner {
            MatrixInput::Exact(m) => (m.rows(), m.cols()),
            MatrixInput::Float { m, .. } => (m.rows(), m.cols()),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ScinvStatus {
    match e {
        Error::NotSquare { .. } => ScinvStatus::NotSquare,
        Error::Singular => ScinvStatus::Singular,
        Error::IrrationalSpectrum => ScinvStatus::IrrationalSpectrum,
        Error::ChainFailure(_) => ScinvStatus::ChainFailure,
        Error::Unsupported { .. } => ScinvStatus::Unsupported,
        Error::Parse(_) => ScinvStatus::Parse,
        _ => ScinvStatus::InvalidArgument,
    }
}

/// Runs `f`, turning errors and panics into a status and a last-error message.
fn guard(f: impl FnOnce() -> Result<(), (ScinvStatus, String)>) -> ScinvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ScinvStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal error: panic caught at the C boundary");
            ScinvStatus::Internal
        }
    }
}

fn fail(e: Error) -> (ScinvStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (ScinvStatus, String) {
    (ScinvStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> (ScinvStatus, String) {
    (ScinvStatus::InvalidArgument, msg.into())
}

/// # Safety
/// `m` must be null or a handle from this library that has not been freed.
unsafe fn handle<'a>(
    m: *const ScinvMatrix,
    what: &str,
) -> Result<&'a ScinvMatrix, (ScinvStatus, String)> {
    m.as_ref().ok_or_else(|| null(what))
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn scinv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn scinv_clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn scinv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Default options: automatic rank cutoff and default Jordan tolerances.
#[no_mangle]
pub extern "C" fn scinv_options_default() -> ScinvOptions {
    ScinvOptions::default()
}

/// Builds a real floating matrix from `rows*cols` row-major doubles.
///
/// # Safety
/// `data` must point to `rows*cols` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scinv_matrix_from_real(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut ScinvMatrix,
) -> ScinvStatus {
    guard(|| {
        if data.is_null() {
            return Err(null("data"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let len = rows
            .checked_mul(cols)
            .ok_or_else(|| invalid("rows*cols overflows"))?;
        let vals = std::slice::from_raw_parts(data, len);
        let m = ComplexMatrix::from_real(rows, cols, vals).map_err(fail)?;
        *out = ScinvMatrix::boxed(MatrixInput::Float { m, complex: false });
        Ok(())
    })
}

/// Builds a complex matrix from `2*rows*cols` doubles, row-major, each entry
/// stored as `re, im`.
///
/// # Safety
/// `data` must point to `2*rows*cols` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scinv_matrix_from_complex(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut ScinvMatrix,
) -> ScinvStatus {
    guard(|| {
        if data.is_null() {
            return Err(null("data"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let len = rows
            .checked_mul(cols)
            .and_then(|n| n.checked_mul(2))
            .ok_or_else(|| invalid("rows*cols overflows"))?;
        let vals = std::slice::from_raw_parts(data, len);
        let entries = vals
            .chunks_exact(2)
            .map(|p| Complex64::new(p[0], p[1]))
            .collect();
        let m = ComplexMatrix::new(rows, cols, entries).map_err(fail)?;
        *out = ScinvMatrix::boxed(MatrixInput::Float { m, complex: true });
        Ok(())
    })
}

/// Builds an exact matrix from `rows*cols` row-major integer numerators and
/// denominators.
///
/// # Safety
/// `num` and `den` must each point to `rows*cols` readable values; `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn scinv_matrix_from_rationals(
    rows: usize,
    cols: usize,
    num: *const i64,
    den: *const i64,
    out: *mut *mut ScinvMatrix,
) -> ScinvStatus {
    guard(|| {
        if num.is_null() || den.is_null() {
            return Err(null("num/den"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let len = rows
            .checked_mul(cols)
            .ok_or_else(|| invalid("rows*cols overflows"))?;
        let (n, d) = (
            std::slice::from_raw_parts(num, len),
            std::slice::from_raw_parts(den, len),
        );
        if d.contains(&0) {
            return Err((ScinvStatus::Parse, "zero denominator".into()));
        }
        let data = n
            .iter()
            .zip(d)
            .map(|(&p, &q)| scinv::exact::ratio(p, q))
            .collect();
        let m = RationalMatrix::new(rows, cols, data).map_err(fail)?;
        *out = ScinvMatrix::boxed(MatrixInput::Exact(m));
        Ok(())
    })
}

/// Parses the JSON matrix format (`{"rows", "cols", "data"}` with number,
/// `"p/q"` or `[re, im]` entries).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scinv_matrix_from_json(
    json: *const c_char,
    out: *mut *mut ScinvMatrix,
) -> ScinvStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| (ScinvStatus::Parse, "json is not valid UTF-8".to_string()))?;
        *out = ScinvMatrix::boxed(parse_matrix(text).map_err(fail)?);
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn scinv_matrix_free(m: *mut ScinvMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn scinv_matrix_rows(m: *const ScinvMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.shape().0)
}

/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn scinv_matrix_cols(m: *const ScinvMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.shape().1)
}

/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn scinv_matrix_is_exact(m: *const ScinvMatrix) -> bool {
    m.as_ref()
        .is_some_and(|m| matches!(m.inner, MatrixInput::Exact(_)))
}

/// Copies the entries as interleaved `re, im` doubles (exact entries are
/// rounded). `len` is the capacity of `out` in doubles.
///
/// # Safety
/// `m` must be a live handle and `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn scinv_matrix_copy_complex(
    m: *const ScinvMatrix,
    out: *mut f64,
    len: usize,
) -> ScinvStatus {
    guard(|| {
        let m = handle(m, "m")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let f = m.inner.to_float();
        let need = 2 * f.data().len();
        if len < need {
            return Err(invalid(format!("buffer holds {len} doubles, need {need}")));
        }
        let dst = std::slice::from_raw_parts_mut(out, need);
        for (pair, z) in dst.chunks_exact_mut(2).zip(f.data()) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    })
}

/// Copies the real parts. Fails with `Unsupported` if any imaginary part is
/// nonzero.
///
/// # Safety
/// `m` must be a live handle and `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn scinv_matrix_copy_real(
    m: *const ScinvMatrix,
    out: *mut f64,
    len: usize,
) -> ScinvStatus {
    guard(|| {
        let m = handle(m, "m")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let f = m.inner.to_float();
        if f.data().iter().any(|z| z.im != 0.0) {
            return Err((
                ScinvStatus::Unsupported,
                "matrix has complex entries".into(),
            ));
        }
        let need = f.data().len();
        if len < need {
            return Err(invalid(format!("buffer holds {len} doubles, need {need}")));
        }
        let dst = std::slice::from_raw_parts_mut(out, need);
        for (d, z) in dst.iter_mut().zip(f.data()) {
            *d = z.re;
        }
        Ok(())
    })
}

/// Serializes to the JSON matrix format (exact entries as `"p/q"`). The string
/// must be released with `scinv_string_free`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scinv_matrix_to_json(
    m: *const ScinvMatrix,
    out: *mut *mut c_char,
) -> ScinvStatus {
    guard(|| {
        let m = handle(m, "m")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let v = match &m.inner {
            MatrixInput::Exact(x) => exact_matrix_json(x),
            MatrixInput::Float { m, complex } => float_matrix_json(m, *complex),
        };
        *out = CString::new(v.to_string())
            .map_err(|_| invalid("interior NUL"))?
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn scinv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn compute_inverse(
    input: &MatrixInput,
    kind: InverseKind,
    backend: ScinvBackend,
    opts: &InverseOptions,
) -> Result<MatrixInput, Error> {
    let complex = input.is_complex();
    let float = |m: ComplexMatrix| -> Result<MatrixInput, Error> {
        Ok(MatrixInput::Float {
            m: geninv::inverse_float(&m, kind, opts)?,
            complex,
        })
    };
    match (backend, input) {
        (ScinvBackend::Float, _) => float(input.to_float()),
        (ScinvBackend::Exact, MatrixInput::Exact(m)) => {
            Ok(MatrixInput::Exact(geninv::inverse_exact(m, kind)?))
        }
        (ScinvBackend::Exact, MatrixInput::Float { .. }) => Err(Error::Unsupported {
            op: "exact backend",
            what: "floating-point input".into(),
        }),
        (ScinvBackend::Auto, MatrixInput::Exact(m)) if kind.has_exact_backend() => {
            if kind != InverseKind::Mp {
                match exact_jordan(m) {
                    Err(Error::IrrationalSpectrum) => return float(input.to_float()),
                    Err(e) => return Err(e),
                    Ok(_) => {}
                }
            }
            Ok(MatrixInput::Exact(geninv::inverse_exact(m, kind)?))
        }
        (ScinvBackend::Auto, _) => float(input.to_float()),
    }
}

/// Generalized inverse of `m`. `opts` may be NULL for defaults. On success
/// `*out` receives a new handle the caller must free.
///
/// # Safety
/// `m` must be a live handle, `opts` null or readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn scinv_inverse(
    m: *const ScinvMatrix,
    kind: ScinvKind,
    backend: ScinvBackend,
    opts: *const ScinvOptions,
    out: *mut *mut ScinvMatrix,
) -> ScinvStatus {
    guard(|| {
        let m = handle(m, "m")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let opts = opts
            .as_ref()
            .copied()
            .unwrap_or_default()
            .to_inverse_options()
            .map_err(fail)?;
        let x = compute_inverse(&m.inner, kind.into(), backend, &opts).map_err(fail)?;
        *out = ScinvMatrix::boxed(x);
        Ok(())
    })
}

/// Relative gain array `M ∘ inv(M)ᵀ` for `Mp` or `Uc`.
///
/// # Safety
/// As for `scinv_inverse`.
#[no_mangle]
pub unsafe extern "C" fn scinv_rga(
    m: *const ScinvMatrix,
    kind: ScinvKind,
    out: *mut *mut ScinvMatrix,
) -> ScinvStatus {
    guard(|| {
        let m = handle(m, "m")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let kind = InverseKind::from(kind);
        if !matches!(kind, InverseKind::Mp | InverseKind::Uc) {
            return Err((
                ScinvStatus::Unsupported,
                format!("rga supports mp and uc, not {kind}"),
            ));
        }
        let g = match &m.inner {
            MatrixInput::Exact(x) if kind == InverseKind::Mp => {
                MatrixInput::Exact(geninv::rga_exact(x, kind).map_err(fail)?)
            }
            inner => MatrixInput::Float {
                m: geninv::rga(&inner.to_float(), kind, &InverseOptions::default())
                    .map_err(fail)?,
                complex: inner.is_complex(),
            },
        };
        *out = ScinvMatrix::boxed(g);
        Ok(())
    })
}

/// `‖A·X·A − A‖_max` and `‖X·A·X − X‖_max`, evaluated in floating point.
///
/// # Safety
/// `a`, `x` must be live handles; `axiom1`, `axiom2` writable.
#[no_mangle]
pub unsafe extern "C" fn scinv_penrose_residuals(
    a: *const ScinvMatrix,
    x: *const ScinvMatrix,
    axiom1: *mut f64,
    axiom2: *mut f64,
) -> ScinvStatus {
    guard(|| {
        let (a, x) = (handle(a, "a")?, handle(x, "x")?);
        if axiom1.is_null() || axiom2.is_null() {
            return Err(null("axiom1/axiom2"));
        }
        let rep = penrose_check(&a.inner.to_float(), &x.inner.to_float()).map_err(fail)?;
        *axiom1 = rep.residual_axiom1;
        *axiom2 = rep.residual_axiom2;
        Ok(())
    })
}
