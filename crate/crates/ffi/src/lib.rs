//! C ABI over `mvweibull`.
//!
//! Objects are passed as opaque handles created by `*_new` functions and
//! released with the matching `*_free`. Every fallible function returns an
//! [`MvwStatus`]; on failure a description is available from
//! [`mvw_last_error_message`] on the same thread. Output pointers are only
//! written on success.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use mvweibull::fit::{fit_mle, params_to_vec, Dataset, FitOptions, FitResult, Observation};
use mvweibull::latent::{sample, seeded_stream};
use mvweibull::moments::{correlation, general_moment, MomentOrder};
use mvweibull::{Error, ModelParams};
use rand_chacha::ChaCha8Rng;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MvwStatus {
    Ok = 0,
    /// An argument is outside the domain of the operation.
    Domain = 1,
    /// A computation failed numerically.
    Numeric = 2,
    /// Malformed input.
    Parse = 3,
    /// Input of the wrong shape or dimension.
    Schema = 4,
    /// The information matrix is not positive definite.
    NotPositiveDefinite = 5,
    Io = 6,
    /// A required pointer argument was null.
    NullPointer = 7,
    /// The requested value does not exist (for example standard errors of a
    /// fit on the boundary).
    Unavailable = 8,
    /// An internal panic was caught at the boundary.
    Panic = 9,
}

/// Model parameters.
pub struct MvwModel {
    params: ModelParams,
}

/// Seeded random stream.
pub struct MvwRng {
    rng: ChaCha8Rng,
}

/// Dataset under construction.
pub struct MvwDataset {
    dim: usize,
    records: Vec<Observation>,
}

/// Outcome of a maximum likelihood fit.
pub struct MvwFitResult {
    result: FitResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(MvwStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Domain(_) => MvwStatus::Domain,
            Error::Numeric(_) => MvwStatus::Numeric,
            Error::Parse(_) => MvwStatus::Parse,
            Error::Schema(_) => MvwStatus::Schema,
            Error::NotPositiveDefinite { .. } => MvwStatus::NotPositiveDefinite,
            Error::Io(_) => MvwStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(MvwStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> MvwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MvwStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal panic: {msg}"));
            MvwStatus::Panic
        }
    }
}

unsafe fn slice_in<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn slice_out<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts_mut(p, len))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(p))));
    }
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Copy of the last error message on this thread, or null if there is none.
/// Release with [`mvw_string_free`].
#[no_mangle]
pub extern "C" fn mvw_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |c| c.clone().into_raw())
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mvw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates a model of dimension `n` from `n` scales and `n` shapes.
///
/// # Safety
/// `scales` and `shapes` must point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mvw_model_new(
    alpha: f64,
    scales: *const f64,
    shapes: *const f64,
    n: usize,
    out: *mut *mut MvwModel,
) -> MvwStatus {
    guard(|| {
        let scales = slice_in(scales, n, "scales")?.to_vec();
        let shapes = slice_in(shapes, n, "shapes")?.to_vec();
        let params = ModelParams::new(alpha, scales, shapes)?;
        write(out, Box::into_raw(Box::new(MvwModel { params })))
    })
}

/// # Safety
/// `model` must be null or a handle from [`mvw_model_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mvw_model_free(model: *mut MvwModel) {
    free(model)
}

/// Dimension of the model, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mvw_model_dim(model: *const MvwModel) -> usize {
    model.as_ref().map_or(0, |m| m.params.dim())
}

unsafe fn eval_at(
    model: *const MvwModel,
    x: *const f64,
    n: usize,
    out: *mut f64,
    f: fn(&ModelParams, &[f64]) -> mvweibull::Result<f64>,
) -> MvwStatus {
    guard(|| {
        let m = handle(model, "model")?;
        let x = slice_in(x, n, "x")?;
        let v = f(&m.params, x)?;
        write(out, v)
    })
}

/// Joint survival probability `P(X > x)`.
///
/// # Safety
/// `x` must point to `n` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mvw_survival(
    model: *const MvwModel,
    x: *const f64,
    n: usize,
    out: *mut f64,
) -> MvwStatus {
    eval_at(model, x, n, out, ModelParams::survival)
}

/// Joint density at a point with positive coordinates.
///
/// # Safety
/// As for [`mvw_survival`].
#[no_mangle]
pub unsafe extern "C" fn mvw_pdf(
    model: *const MvwModel,
    x: *const f64,
    n: usize,
    out: *mut f64,
) -> MvwStatus {
    eval_at(model, x, n, out, ModelParams::pdf)
}

/// Log of the joint density.
///
/// # Safety
/// As for [`mvw_survival`].
#[no_mangle]
pub unsafe extern "C" fn mvw_log_pdf(
    model: *const MvwModel,
    x: *const f64,
    n: usize,
    out: *mut f64,
) -> MvwStatus {
    eval_at(model, x, n, out, ModelParams::log_pdf)
}

/// `(-1)^m` times the mixed partial derivative of the survival function in
/// the `m` zero-based coordinates listed in `observed`.
///
/// # Safety
/// `x` must point to `n` doubles, `observed` to `m` indices, and `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn mvw_mixed_partial_survival(
    model: *const MvwModel,
    x: *const f64,
    n: usize,
    observed: *const usize,
    m: usize,
    out: *mut f64,
) -> MvwStatus {
    guard(|| {
        let model = handle(model, "model")?;
        let x = slice_in(x, n, "x")?;
        let observed = slice_in(observed, m, "observed")?;
        let v = model.params.mixed_partial_survival(x, observed)?;
        write(out, v)
    })
}

/// Product moment `E[x_1^e_1 ... x_n^e_n]`.
///
/// # Safety
/// `exponents` must point to `n` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mvw_moment(
    model: *const MvwModel,
    exponents: *const f64,
    n: usize,
    out: *mut f64,
) -> MvwStatus {
    guard(|| {
        let m = handle(model, "model")?;
        let order = MomentOrder::new(slice_in(exponents, n, "exponents")?.to_vec())?;
        let v = general_moment(&m.params, &order)?;
        write(out, v)
    })
}

/// Correlation of coordinates `i` and `j` (zero-based).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mvw_correlation(
    model: *const MvwModel,
    i: usize,
    j: usize,
    out: *mut f64,
) -> MvwStatus {
    guard(|| {
        let m = handle(model, "model")?;
        let n = m.params.dim();
        if i >= n || j >= n {
            return Err(Failure(
                MvwStatus::Domain,
                format!("index out of range for dimension {n}"),
            ));
        }
        let v = correlation(&m.params, i, j)?;
        write(out, v)
    })
}

/// Creates the random stream identified by `(seed, stream)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mvw_rng_new(seed: u64, stream: u64, out: *mut *mut MvwRng) -> MvwStatus {
    guard(|| {
        let rng = seeded_stream(seed, stream);
        write(out, Box::into_raw(Box::new(MvwRng { rng })))
    })
}

/// # Safety
/// `rng` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mvw_rng_free(rng: *mut MvwRng) {
    free(rng)
}

/// Draws `count` points into `out`, row-major (`count * dim` doubles).
///
/// # Safety
/// `out` must point to `count * dim` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mvw_sample(
    model: *const MvwModel,
    rng: *mut MvwRng,
    count: usize,
    out: *mut f64,
) -> MvwStatus {
    guard(|| {
        let m = handle(model, "model")?;
        let rng = rng.as_mut().ok_or_else(|| null("rng"))?;
        let n = m.params.dim();
        let len = count
            .checked_mul(n)
            .ok_or_else(|| Failure(MvwStatus::Domain, "count * dim overflows".into()))?;
        let out = slice_out(out, len, "out")?;
        let draws = sample(&m.params, &mut rng.rng, count)?;
        for (row, x) in out.chunks_exact_mut(n).zip(&draws) {
            row.copy_from_slice(x);
        }
        Ok(())
    })
}

/// Creates an empty dataset of dimension `dim`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mvw_dataset_new(dim: usize, out: *mut *mut MvwDataset) -> MvwStatus {
    guard(|| {
        if dim == 0 || dim > mvweibull::combinatorics::MAX_DIMENSION {
            return Err(Failure(
                MvwStatus::Domain,
                format!(
                    "dimension must be between 1 and {}",
                    mvweibull::combinatorics::MAX_DIMENSION
                ),
            ));
        }
        write(
            out,
            Box::into_raw(Box::new(MvwDataset {
                dim,
                records: Vec::new(),
            })),
        )
    })
}

/// The embedded rat tumor dataset (dimension 3, 50 records).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mvw_dataset_rats(out: *mut *mut MvwDataset) -> MvwStatus {
    guard(|| {
        let d = mvweibull::data::rats();
        let ds = MvwDataset {
            dim: d.dim(),
            records: d.records().to_vec(),
        };
        write(out, Box::into_raw(Box::new(ds)))
    })
}

/// Appends one record: `dim` times and `dim` flags where nonzero marks a
/// right-censored time.
///
/// # Safety
/// `times` and `censored` must point to `dim` elements.
#[no_mangle]
pub unsafe extern "C" fn mvw_dataset_push(
    dataset: *mut MvwDataset,
    times: *const f64,
    censored: *const u8,
    dim: usize,
) -> MvwStatus {
    guard(|| {
        let ds = dataset.as_mut().ok_or_else(|| null("dataset"))?;
        if dim != ds.dim {
            return Err(Failure(
                MvwStatus::Schema,
                format!("record has {dim} coordinates, dataset has dimension {}", ds.dim),
            ));
        }
        let times = slice_in(times, dim, "times")?.to_vec();
        let censored = slice_in(censored, dim, "censored")?
            .iter()
            .map(|c| *c != 0)
            .collect();
        ds.records.push(Observation::new(times, censored)?);
        Ok(())
    })
}

/// Number of records, or 0 for a null handle.
///
/// # Safety
/// `dataset` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mvw_dataset_len(dataset: *const MvwDataset) -> usize {
    dataset.as_ref().map_or(0, |d| d.records.len())
}

/// # Safety
/// `dataset` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mvw_dataset_free(dataset: *mut MvwDataset) {
    free(dataset)
}

/// Maximum likelihood fit with default options. A result is produced even
/// when the fit did not converge; inspect it with the accessors.
///
/// # Safety
/// `dataset` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mvw_fit(dataset: *const MvwDataset, out: *mut *mut MvwFitResult) -> MvwStatus {
    guard(|| {
        let ds = handle(dataset, "dataset")?;
        let d = Dataset::new(ds.records.clone())?;
        let result = fit_mle(&d, None, &FitOptions::default())?;
        write(out, Box::into_raw(Box::new(MvwFitResult { result })))
    })
}

/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mvw_fit_result_free(result: *mut MvwFitResult) {
    free(result)
}

/// Length of the estimate vector `(alpha, scale_1, shape_1, ..)`: `2 dim + 1`.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mvw_fit_result_estimate_count(result: *const MvwFitResult) -> usize {
    result.as_ref().map_or(0, |r| 2 * r.result.estimates.dim() + 1)
}

/// Writes `(alpha, scale_1, shape_1, ..)` into `out` (`len` doubles, at
/// least [`mvw_fit_result_estimate_count`]).
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mvw_fit_result_estimates(
    result: *const MvwFitResult,
    out: *mut f64,
    len: usize,
) -> MvwStatus {
    guard(|| {
        let r = handle(result, "result")?;
        let v = params_to_vec(&r.result.estimates);
        copy_out(&v, out, len)
    })
}

/// Number of free parameters with a standard error: `2 dim + 1`, or 2 for
/// one-dimensional data where alpha is fixed.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mvw_fit_result_parameter_count(result: *const MvwFitResult) -> usize {
    result.as_ref().map_or(0, |r| r.result.parameter_names.len())
}

/// Writes the standard errors of the free parameters, in the order of the
/// estimates (alpha omitted for one-dimensional data). Returns
/// `Unavailable` when they do not exist.
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mvw_fit_result_standard_errors(
    result: *const MvwFitResult,
    out: *mut f64,
    len: usize,
) -> MvwStatus {
    guard(|| {
        let r = handle(result, "result")?;
        let se = r.result.standard_errors.as_ref().ok_or_else(|| {
            let why = if r.result.diagnostics.is_empty() {
                "standard errors are not available".to_string()
            } else {
                r.result.diagnostics.join("; ")
            };
            Failure(MvwStatus::Unavailable, why)
        })?;
        copy_out(se, out, len)
    })
}

fn copy_out(v: &[f64], out: *mut f64, len: usize) -> Result<(), Failure> {
    if len < v.len() {
        return Err(Failure(
            MvwStatus::Schema,
            format!("output buffer holds {len} values, {} needed", v.len()),
        ));
    }
    let out = unsafe { slice_out(out, v.len(), "out")? };
    out.copy_from_slice(v);
    Ok(())
}

/// Maximized log-likelihood, or NaN for a null handle.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mvw_fit_result_log_likelihood(result: *const MvwFitResult) -> f64 {
    result.as_ref().map_or(f64::NAN, |r| r.result.log_likelihood)
}

/// 1 if the optimizer converged, 0 otherwise (or for a null handle).
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mvw_fit_result_converged(result: *const MvwFitResult) -> i32 {
    result.as_ref().map_or(0, |r| r.result.converged as i32)
}

/// The full result as a JSON document. Release with [`mvw_string_free`].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mvw_fit_result_to_json(
    result: *const MvwFitResult,
    out: *mut *mut c_char,
) -> MvwStatus {
    guard(|| {
        let r = handle(result, "result")?;
        let text =
            serde_json::to_string(&r.result).map_err(|e| Failure(MvwStatus::Numeric, e.to_string()))?;
        write(out, to_c_string(text))
    })
}
