//! C interface to the trace-formula laboratory.
//!
//! Models are exposed as opaque handles created by the `plab_model_*`
//! constructors and released with [`plab_model_free`]. Every fallible call
//! returns a [`PlabStatus`]; on failure a human-readable message is stored
//! per thread and can be copied out with [`plab_last_error_message`].
//!
//! The generated header lands in `include/principal_lab.h` at build time.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use principal_lab::functions::poly::PolyFunction;
use principal_lab::models::{
    verify_hyponormal, HyponormalModel, ModelKind, ModelSpec,
};
use principal_lab::principal::{lemma1_check, moment, positivity_probe, Axis};
use principal_lab::Error;

/// Status code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlabStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Arguments were structurally invalid (bad dimension, parameter out of
    /// range, non-real coefficients, probe window too small, ...).
    InvalidArgument = 2,
    /// The quantity is not defined for this model family.
    Unsupported = 3,
    /// A numerical routine failed internally.
    Numerical = 4,
}

/// Which operator a one-variable probe polynomial is applied to.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlabAxis {
    /// Apply the polynomial to Y; pairs -i[psi(Y), X] with Tr{psi'(Y) D2}.
    Y = 0,
    /// Apply the polynomial to X; pairs -i[Y, psi(X)] with Tr{psi'(X) D2}.
    X = 1,
}

/// Structural health report of a built model.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct PlabHyponormality {
    /// Smallest eigenvalue of the corner block of the self-commutator;
    /// nonnegative up to rounding for a hyponormal truncation.
    pub corner_selfcommutator_eigmin: f64,
    /// Largest deviation of -i[Y, X] from the stored defect operator away
    /// from the truncation edge.
    pub d2_max_deviation: f64,
    /// Smallest eigenvalue of X over the truncation.
    pub x_min: f64,
    /// Largest eigenvalue of X over the truncation.
    pub x_max: f64,
    /// Whether the X spectrum sits inside the stated interval.
    pub interval_contains_spectrum: bool,
    /// Stored Tr(D2) minus the recomputed diagonal sum, absolute.
    pub tr_d2_error: f64,
}

/// Opaque handle to a built operator model.
pub struct PlabModel {
    inner: HyponormalModel,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_last_error(message: impl Into<String>) {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message.into());
}

fn fail(err: Error) -> PlabStatus {
    let status = match err {
        Error::UnsupportedModel { .. } => PlabStatus::Unsupported,
        Error::NotHermitian { .. } | Error::Io { .. } => PlabStatus::Numerical,
        _ => PlabStatus::InvalidArgument,
    };
    set_last_error(err.to_string());
    status
}

fn guarded(body: impl FnOnce() -> PlabStatus) -> PlabStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("internal panic in numerical routine");
            PlabStatus::Numerical
        }
    }
}

/// Null-checked shared borrow of a handle.
unsafe fn model_ref<'a>(handle: *const PlabModel) -> Option<&'a HyponormalModel> {
    unsafe { handle.as_ref().map(|h| &h.inner) }
}

/// Copies `len` coefficients; an empty slice is the zero polynomial.
unsafe fn coeff_slice<'a>(coeffs: *const f64, len: usize) -> Option<&'a [f64]> {
    if len == 0 {
        Some(&[])
    } else if coeffs.is_null() {
        None
    } else {
        Some(unsafe { std::slice::from_raw_parts(coeffs, len) })
    }
}

fn build_handle(kind: ModelKind, ambient_dim: usize, corner_dim: usize, out: *mut *mut PlabModel) -> PlabStatus {
    guarded(|| {
        let spec = match ModelSpec::new(kind, ambient_dim, corner_dim) {
            Ok(spec) => spec,
            Err(err) => return fail(err),
        };
        match HyponormalModel::build(spec) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(PlabModel { inner })) };
                PlabStatus::Ok
            }
            Err(err) => fail(err),
        }
    })
}

/// Version of the library as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn plab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copies the last error message of the calling thread into `buffer`
/// (NUL-terminated, truncated to `capacity`). Returns the full message
/// length in bytes excluding the terminator; a zero return means no error
/// has been recorded. Passing a null buffer or zero capacity just queries
/// the length.
///
/// # Safety
/// `buffer` must be null or valid for writes of `capacity` bytes.
#[no_mangle]
pub unsafe extern "C" fn plab_last_error_message(buffer: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let message = slot.borrow();
        let bytes = message.as_bytes();
        if !buffer.is_null() && capacity > 0 {
            let n = bytes.len().min(capacity - 1);
            unsafe {
                std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buffer, n);
                *buffer.add(n) = 0;
            }
        }
        bytes.len()
    })
}

/// Builds the unweighted shift model at the given truncation and corner
/// sizes and stores the handle in `*out`.
///
/// # Safety
/// `out` must be valid for writes; the returned handle must be released
/// with `plab_model_free`.
#[no_mangle]
pub unsafe extern "C" fn plab_model_shift(
    ambient_dim: usize,
    corner_dim: usize,
    out: *mut *mut PlabModel,
) -> PlabStatus {
    if out.is_null() {
        return PlabStatus::NullArgument;
    }
    build_handle(ModelKind::Shift, ambient_dim, corner_dim, out)
}

/// Builds the elliptic model T = S + c e^{i phase} S* (0 < c < 1).
///
/// # Safety
/// `out` must be valid for writes; the returned handle must be released
/// with `plab_model_free`.
#[no_mangle]
pub unsafe extern "C" fn plab_model_elliptic(
    c: f64,
    phase: f64,
    ambient_dim: usize,
    corner_dim: usize,
    out: *mut *mut PlabModel,
) -> PlabStatus {
    if out.is_null() {
        return PlabStatus::NullArgument;
    }
    build_handle(ModelKind::Elliptic { c, phase }, ambient_dim, corner_dim, out)
}

/// Builds the q-weighted shift model with weights sqrt(1 - q^{j+1})
/// (0 < q < 1).
///
/// # Safety
/// `out` must be valid for writes; the returned handle must be released
/// with `plab_model_free`.
#[no_mangle]
pub unsafe extern "C" fn plab_model_q_weighted(
    q: f64,
    ambient_dim: usize,
    corner_dim: usize,
    out: *mut *mut PlabModel,
) -> PlabStatus {
    if out.is_null() {
        return PlabStatus::NullArgument;
    }
    build_handle(ModelKind::QWeighted { q }, ambient_dim, corner_dim, out)
}

/// Releases a model handle. Null is a no-op; a handle must not be used
/// after it is freed.
///
/// # Safety
/// `model` must be null or a handle produced by a `plab_model_*`
/// constructor that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn plab_model_free(model: *mut PlabModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Stores the truncation dimension in `*out`.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn plab_model_ambient_dim(model: *const PlabModel, out: *mut usize) -> PlabStatus {
    let Some(model) = (unsafe { model_ref(model) }) else { return PlabStatus::NullArgument };
    if out.is_null() {
        return PlabStatus::NullArgument;
    }
    unsafe { *out = model.ambient_dim() };
    PlabStatus::Ok
}

/// Stores the corner window size in `*out`.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn plab_model_corner_dim(model: *const PlabModel, out: *mut usize) -> PlabStatus {
    let Some(model) = (unsafe { model_ref(model) }) else { return PlabStatus::NullArgument };
    if out.is_null() {
        return PlabStatus::NullArgument;
    }
    unsafe { *out = model.corner_dim() };
    PlabStatus::Ok
}

/// Stores the trace of the self-commutator defect D2 in `*out`.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn plab_model_tr_d2(model: *const PlabModel, out: *mut f64) -> PlabStatus {
    let Some(model) = (unsafe { model_ref(model) }) else { return PlabStatus::NullArgument };
    if out.is_null() {
        return PlabStatus::NullArgument;
    }
    unsafe { *out = model.tr_d2() };
    PlabStatus::Ok
}

/// Stores the symmetric spectral interval [lo, hi] of X and Y.
///
/// # Safety
/// `model` must be a live handle; `lo` and `hi` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn plab_model_interval(
    model: *const PlabModel,
    lo: *mut f64,
    hi: *mut f64,
) -> PlabStatus {
    let Some(model) = (unsafe { model_ref(model) }) else { return PlabStatus::NullArgument };
    if lo.is_null() || hi.is_null() {
        return PlabStatus::NullArgument;
    }
    let (a, b) = model.interval();
    unsafe {
        *lo = a;
        *hi = b;
    }
    PlabStatus::Ok
}

/// Runs the structural hyponormality checks and stores the report.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn plab_model_verify(
    model: *const PlabModel,
    out: *mut PlabHyponormality,
) -> PlabStatus {
    let Some(model) = (unsafe { model_ref(model) }) else { return PlabStatus::NullArgument };
    if out.is_null() {
        return PlabStatus::NullArgument;
    }
    guarded(|| {
        let report = verify_hyponormal(model);
        unsafe {
            *out = PlabHyponormality {
                corner_selfcommutator_eigmin: report.corner_selfcommutator_eigmin,
                d2_max_deviation: report.d2_max_deviation,
                x_min: report.x_spectrum_bounds.0,
                x_max: report.x_spectrum_bounds.1,
                interval_contains_spectrum: report.interval_contains_spectrum,
                tr_d2_error: report.tr_d2_error,
            };
        }
        PlabStatus::Ok
    })
}

/// Computes the monomial moment mu(p, q) = corner trace pairing of
/// t^p lambda^q against the principal-function data and stores it in `*out`.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn plab_moment(
    model: *const PlabModel,
    p: usize,
    q: usize,
    out: *mut f64,
) -> PlabStatus {
    let Some(model) = (unsafe { model_ref(model) }) else { return PlabStatus::NullArgument };
    if out.is_null() {
        return PlabStatus::NullArgument;
    }
    guarded(|| match moment(model, p, q) {
        Ok(value) => {
            unsafe { *out = value };
            PlabStatus::Ok
        }
        Err(err) => fail(err),
    })
}

/// Stores the closed-form area-integral moment for model families that have
/// one; `PLAB_STATUS_UNSUPPORTED` otherwise.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn plab_expected_moment(
    model: *const PlabModel,
    p: usize,
    q: usize,
    out: *mut f64,
) -> PlabStatus {
    let Some(model) = (unsafe { model_ref(model) }) else { return PlabStatus::NullArgument };
    if out.is_null() {
        return PlabStatus::NullArgument;
    }
    match model.expected_moment(p, q) {
        Some(value) => {
            unsafe { *out = value };
            PlabStatus::Ok
        }
        None => {
            set_last_error("no closed-form moment for this model family");
            PlabStatus::Unsupported
        }
    }
}

/// Evaluates the principal function via the symbol winding number at the
/// point (u, v) and stores it in `*out`; unsupported for families without a
/// closed symbol curve.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn plab_winding_r(
    model: *const PlabModel,
    u: f64,
    v: f64,
    out: *mut f64,
) -> PlabStatus {
    let Some(model) = (unsafe { model_ref(model) }) else { return PlabStatus::NullArgument };
    if out.is_null() {
        return PlabStatus::NullArgument;
    }
    guarded(|| match model.winding_r(u, v) {
        Ok(value) => {
            unsafe { *out = value };
            PlabStatus::Ok
        }
        Err(err) => fail(err),
    })
}

/// Checks the one-variable trace lemma for the real polynomial with the
/// given ascending coefficients: corner trace of the commutator on `lhs`,
/// defect-weighted derivative trace on `rhs`.
///
/// # Safety
/// `model` must be a live handle; `coeffs` must be null only when `len` is
/// zero and otherwise valid for reads of `len` doubles; `lhs` and `rhs`
/// must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn plab_lemma_check(
    model: *const PlabModel,
    coeffs: *const f64,
    len: usize,
    axis: PlabAxis,
    lhs: *mut f64,
    rhs: *mut f64,
) -> PlabStatus {
    let Some(model) = (unsafe { model_ref(model) }) else { return PlabStatus::NullArgument };
    let Some(coeffs) = (unsafe { coeff_slice(coeffs, len) }) else {
        return PlabStatus::NullArgument;
    };
    if lhs.is_null() || rhs.is_null() {
        return PlabStatus::NullArgument;
    }
    guarded(|| {
        let psi = match PolyFunction::from_real(coeffs, model.interval()) {
            Ok(psi) => psi,
            Err(err) => return fail(err),
        };
        let mapped = match axis {
            PlabAxis::Y => Axis::Y,
            PlabAxis::X => Axis::X,
        };
        match lemma1_check(model, &psi, mapped) {
            Ok(identity) => {
                unsafe {
                    *lhs = identity.lhs;
                    *rhs = identity.rhs;
                }
                PlabStatus::Ok
            }
            Err(err) => fail(err),
        }
    })
}

/// Smallest eigenvalue of the corner block of -i[psi(Y), X] for the real
/// polynomial with the given ascending coefficients.
///
/// # Safety
/// `model` must be a live handle; `coeffs` must be null only when `len` is
/// zero and otherwise valid for reads of `len` doubles; `out` must be valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn plab_positivity_probe(
    model: *const PlabModel,
    coeffs: *const f64,
    len: usize,
    out: *mut f64,
) -> PlabStatus {
    let Some(model) = (unsafe { model_ref(model) }) else { return PlabStatus::NullArgument };
    let Some(coeffs) = (unsafe { coeff_slice(coeffs, len) }) else {
        return PlabStatus::NullArgument;
    };
    if out.is_null() {
        return PlabStatus::NullArgument;
    }
    guarded(|| {
        let psi = match PolyFunction::from_real(coeffs, model.interval()) {
            Ok(psi) => psi,
            Err(err) => return fail(err),
        };
        match positivity_probe(model, &psi) {
            Ok(value) => {
                unsafe { *out = value };
                PlabStatus::Ok
            }
            Err(err) => fail(err),
        }
    })
}
