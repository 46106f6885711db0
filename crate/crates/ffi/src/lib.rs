//! C ABI over `choimap`. Maps are opaque handles created by the
//! `choimap_map_*` constructors and released with [`choimap_map_free`].
//! Every fallible call returns a [`ChoimapStatus`]; on failure the message
//! is available from [`choimap_last_error`] on the same thread.
//!
//! Matrices cross the boundary as separate real and imaginary arrays of
//! nine `double`s in row-major order. Map images are given for the basis
//! `E11 E22 E33 S12 S13 S23 H12 H13 H23`, 81 values per array.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use choimap::matrix::rank_one_projector;
use choimap::positivity::sample_positivity;
use choimap::replay::replay_choi_extremality;
use choimap::report::{verify_paper, PaperConfig};
use choimap::{BuiltinMap, ComplexMap, ComplexMatrix, Error, Matrix};
use num_complex::Complex64;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChoimapStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownMap = 3,
    BufferTooSmall = 4,
    CheckFailed = 5,
    Internal = 6,
}

/// Opaque map on `M_3`.
pub struct ChoimapMap {
    inner: ComplexMap,
}

/// Outcome of [`choimap_sample_positivity`]. The witness is meaningful only
/// when `violation` is true.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct ChoimapPositivity {
    pub violation: bool,
    pub lambda_min: f64,
    pub samples_used: u64,
    pub witness_re: [f64; 3],
    pub witness_im: [f64; 3],
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(e: &Error) -> ChoimapStatus {
    match e {
        Error::UnknownMap(_) => ChoimapStatus::UnknownMap,
        Error::Parse(_)
        | Error::Json(_)
        | Error::Dimension { .. }
        | Error::NotHermitian { .. }
        | Error::Precondition(_) => ChoimapStatus::InvalidArgument,
        Error::CertificateFailure { .. } | Error::Replay(_) => ChoimapStatus::CheckFailed,
        _ => ChoimapStatus::Internal,
    }
}

struct Fail(ChoimapStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null() -> Fail {
    Fail(ChoimapStatus::NullPointer, "null pointer argument".into())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ChoimapStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ChoimapStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ChoimapStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(ChoimapStatus::InvalidArgument, "string is not UTF-8".into()))
}

unsafe fn map_arg<'a>(p: *const ChoimapMap) -> Result<&'a ComplexMap, Fail> {
    p.as_ref().map(|m| &m.inner).ok_or_else(null)
}

unsafe fn complex_arg(re: *const f64, im: *const f64, len: usize) -> Result<Vec<Complex64>, Fail> {
    if re.is_null() || im.is_null() {
        return Err(null());
    }
    let (re, im) = (std::slice::from_raw_parts(re, len), std::slice::from_raw_parts(im, len));
    Ok(re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect())
}

unsafe fn write_matrix(m: &ComplexMatrix, re: *mut f64, im: *mut f64) -> Result<(), Fail> {
    if re.is_null() || im.is_null() {
        return Err(null());
    }
    for (k, z) in m.entries().iter().enumerate() {
        *re.add(k) = z.re;
        *im.add(k) = z.im;
    }
    Ok(())
}

unsafe fn emit(out: *mut *mut ChoimapMap, inner: ComplexMap) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(ChoimapMap { inner }));
    Ok(())
}

/// Copies `msg` with a trailing NUL into `buf` of `len` bytes; `needed`
/// receives the full size including the NUL.
unsafe fn write_string(msg: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> Result<(), Fail> {
    if !needed.is_null() {
        *needed = msg.len() + 1;
    }
    if buf.is_null() || len < msg.len() + 1 {
        return Err(Fail(ChoimapStatus::BufferTooSmall, format!("{} bytes needed", msg.len() + 1)));
    }
    ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, msg.len());
    *buf.add(msg.len()) = 0;
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn choimap_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf`. Returns the
/// message length including the NUL; nothing is written when `len` is too small.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn choimap_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let mut needed = 0;
        let _ = write_string(&msg, buf, len, &mut needed);
        needed
    })
}

/// Builtin map by name: `choi`, `transpose`, `identity`, `psi1`, `psi2`, `psi3`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn choimap_map_builtin(name: *const c_char, out: *mut *mut ChoimapMap) -> ChoimapStatus {
    guard(|| {
        let which: BuiltinMap = str_arg(name)?.parse()?;
        emit(out, ComplexMap::builtin(which))
    })
}

/// Map from a JSON map spec.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn choimap_map_from_json(json: *const c_char, out: *mut *mut ChoimapMap) -> ChoimapStatus {
    guard(|| {
        let spec: choimap::maps::MapSpec = serde_json::from_str(str_arg(json)?).map_err(Error::from)?;
        let m = spec.into_map()?;
        if m.dim() != 3 {
            return Err(Fail(ChoimapStatus::InvalidArgument, "only maps on M_3 are supported".into()));
        }
        emit(out, m)
    })
}

/// Map from its nine basis images, 81 real and 81 imaginary parts.
///
/// # Safety
/// `re` and `im` must each point to 81 doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn choimap_map_from_images(
    re: *const f64,
    im: *const f64,
    out: *mut *mut ChoimapMap,
) -> ChoimapStatus {
    guard(|| {
        let v = complex_arg(re, im, 81)?;
        let images = v.chunks(9).map(|c| Matrix::from_fn(3, |r, k| c[3 * r + k])).collect();
        emit(out, choimap::LinearMap::from_images(3, images)?)
    })
}

/// Releases a map. Null is ignored.
///
/// # Safety
/// `map` must come from a `choimap_map_*` constructor and not be used again.
#[no_mangle]
pub unsafe extern "C" fn choimap_map_free(map: *mut ChoimapMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Writes the JSON spec of `map` into `buf`; `needed` receives the size
/// including the NUL. With a null or short `buf` nothing is written and
/// `BufferTooSmall` is returned, so a first call can query the size.
///
/// # Safety
/// `map` must be a valid handle, `buf` null or valid for `len` bytes, and
/// `needed` null or valid.
#[no_mangle]
pub unsafe extern "C" fn choimap_map_to_json(
    map: *const ChoimapMap,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> ChoimapStatus {
    guard(|| {
        let text = serde_json::to_string(&choimap::maps::MapSpec::from_map(map_arg(map)?)).map_err(Error::from)?;
        write_string(&text, buf, len, needed)
    })
}

/// `map(X)` for a 3x3 matrix `X`.
///
/// # Safety
/// Input arrays must hold 9 doubles and output arrays room for 9.
#[no_mangle]
pub unsafe extern "C" fn choimap_map_apply(
    map: *const ChoimapMap,
    x_re: *const f64,
    x_im: *const f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> ChoimapStatus {
    guard(|| {
        let m = map_arg(map)?;
        let x = complex_arg(x_re, x_im, 9)?;
        let y = m.apply(&Matrix::from_fn(3, |r, k| x[3 * r + k]))?;
        write_matrix(&y, out_re, out_im)
    })
}

/// Ascending eigenvalues of `map(v v*)`.
///
/// # Safety
/// `v_re`, `v_im` must hold 3 doubles and `eigenvalues` room for 3.
#[no_mangle]
pub unsafe extern "C" fn choimap_rank_one_eigenvalues(
    map: *const ChoimapMap,
    v_re: *const f64,
    v_im: *const f64,
    eigenvalues: *mut f64,
) -> ChoimapStatus {
    guard(|| {
        let m = map_arg(map)?;
        let v = complex_arg(v_re, v_im, 3)?;
        if eigenvalues.is_null() {
            return Err(null());
        }
        let eig = m.apply(&rank_one_projector(&v)?)?.eigenvalues_hermitian(1e-9)?;
        ptr::copy_nonoverlapping(eig.as_ptr(), eigenvalues, 3);
        Ok(())
    })
}

/// Ascending eigenvalues of the Choi matrix of `map` and of `map∘t`, and
/// the CP and co-CP verdicts at `tol`.
///
/// # Safety
/// `choi` and `choi_t` must have room for 9 doubles; the flags must be valid.
#[no_mangle]
pub unsafe extern "C" fn choimap_choi_spectrum(
    map: *const ChoimapMap,
    tol: f64,
    choi: *mut f64,
    choi_t: *mut f64,
    cp: *mut bool,
    co_cp: *mut bool,
) -> ChoimapStatus {
    guard(|| {
        let m = map_arg(map)?;
        if choi.is_null() || choi_t.is_null() || cp.is_null() || co_cp.is_null() {
            return Err(null());
        }
        let a = m.choi_matrix().eigenvalues_hermitian(1e-9)?;
        let b = m.compose_transpose().choi_matrix().eigenvalues_hermitian(1e-9)?;
        ptr::copy_nonoverlapping(a.as_ptr(), choi, 9);
        ptr::copy_nonoverlapping(b.as_ptr(), choi_t, 9);
        *cp = a[0] >= -tol;
        *co_cp = b[0] >= -tol;
        Ok(())
    })
}

/// Seeded sampling of `λ_min(map(x x*))` over random unit vectors.
///
/// # Safety
/// `map` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn choimap_sample_positivity(
    map: *const ChoimapMap,
    samples: u64,
    seed: u64,
    tol: f64,
    out: *mut ChoimapPositivity,
) -> ChoimapStatus {
    guard(|| {
        let m = map_arg(map)?;
        if out.is_null() {
            return Err(null());
        }
        let v = sample_positivity(m, samples, seed, tol);
        let mut r =
            ChoimapPositivity { violation: v.is_violation(), samples_used: v.samples_used, ..Default::default() };
        if let Some(w) = v.witness {
            r.lambda_min = w.lambda_min;
            for k in 0..3 {
                r.witness_re[k] = w.x[k].re;
                r.witness_im[k] = w.x[k].im;
            }
        }
        *out = r;
        Ok(())
    })
}

/// Runs the exact extremality replay; `steps` receives the log length.
/// Returns `CheckFailed` if any identity or rule fails.
///
/// # Safety
/// `concluded` and `steps` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn choimap_replay(concluded: *mut bool, steps: *mut usize) -> ChoimapStatus {
    guard(|| {
        let r = replay_choi_extremality()?;
        if let Some(c) = concluded.as_mut() {
            *c = r.conclusion;
        }
        if let Some(s) = steps.as_mut() {
            *s = r.steps.len();
        }
        Ok(())
    })
}

/// Runs every check of `verify-paper` with default settings and `seed`.
/// Returns `CheckFailed` naming the failing sections when one fails.
///
/// # Safety
/// `passed` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn choimap_verify_paper(seed: u64, passed: *mut bool) -> ChoimapStatus {
    guard(|| {
        let report = verify_paper(&PaperConfig { seed, ..Default::default() });
        if let Some(p) = passed.as_mut() {
            *p = report.passed;
        }
        if report.passed {
            Ok(())
        } else {
            Err(Fail(ChoimapStatus::CheckFailed, format!("failed: {}", report.failures().join(", "))))
        }
    })
}
