//! C ABI for the dualinv library.
//!
//! Dual matrices live behind the opaque handle `DgiMatrix`; every function
//! returns a `DgiStatus` code and writes results through out-pointers.
//! Handles returned through out-pointers are owned by the caller and must
//! be released with [`dgi_matrix_free`]. All functions are panic-safe:
//! internal panics are caught and reported as `DgiStatus::Internal`.
//!
//! The C header is generated into `include/dualinv.h` at build time.

use std::ffi::{c_char, c_int};
use std::panic::{catch_unwind, AssertUnwindSafe};

use dualinv::dualginv::{dcgi, dggi, dmpgi, dual_index_is_one, mpdgi};
use dualinv::dualsolve::solve;
use dualinv::{DualMatrix, DualVector, Error, InverseKind, RealMatrix, Tolerance};

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DgiStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was out of domain: bad kind value, bad tolerance,
    /// non-finite entries or an empty shape.
    InvalidArgument = 2,
    /// Matrix shapes do not conform, or a square matrix was required.
    ShapeMismatch = 3,
    /// The requested inverse does not exist for this input.
    NotExist = 4,
    /// The input is not symmetric where symmetry is required.
    NotSymmetric = 5,
    /// Existence characterizations disagreed near a rank boundary.
    Inconsistent = 6,
    /// An internal cross-check failed or a panic was caught.
    Internal = 7,
}

/// Inverse selector values for the `kind` parameter.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DgiKind {
    Mpdgi = 0,
    Dmpgi = 1,
    Dggi = 2,
    Dcgi = 3,
}

/// Opaque dual matrix handle.
pub struct DgiMatrix(DualMatrix);

fn status_of(e: &Error) -> DgiStatus {
    match e {
        Error::DimensionMismatch { .. } | Error::NotSquare { .. } => DgiStatus::ShapeMismatch,
        Error::NonFiniteEntry { .. }
        | Error::EmptyMatrix { .. }
        | Error::BadEntryCount { .. }
        | Error::InvalidTolerance { .. } => DgiStatus::InvalidArgument,
        Error::GroupInverseNotExist { .. }
        | Error::CoreInverseNotExist { .. }
        | Error::DmpgiNotExist { .. }
        | Error::DggiNotExist { .. }
        | Error::DcgiNotExist { .. } => DgiStatus::NotExist,
        Error::NotSymmetric { .. } => DgiStatus::NotSymmetric,
        Error::InconsistentCertificate { .. } => DgiStatus::Inconsistent,
        Error::InternalFormulaMismatch { .. } => DgiStatus::Internal,
    }
}

fn kind_of(kind: c_int) -> Option<InverseKind> {
    match kind {
        0 => Some(InverseKind::Mpdgi),
        1 => Some(InverseKind::Dmpgi),
        2 => Some(InverseKind::Dggi),
        3 => Some(InverseKind::Dcgi),
        _ => None,
    }
}

fn tolerance_of(rank_tol: f64, eq_tol: f64) -> Result<Tolerance, Error> {
    // Only a finite value <= 0 selects the default; NaN and infinities
    // are errors rather than silent fallbacks.
    if !rank_tol.is_finite() || !eq_tol.is_finite() {
        return Err(Error::InvalidTolerance { rank_tol, eq_tol });
    }
    let rank_tol = if rank_tol > 0.0 {
        rank_tol
    } else {
        Tolerance::default().rank_tol
    };
    let eq_tol = if eq_tol > 0.0 { eq_tol } else { 100.0 * rank_tol };
    Tolerance::new(rank_tol, eq_tol)
}

fn guarded(f: impl FnOnce() -> DgiStatus) -> DgiStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(DgiStatus::Internal)
}

/// Creates a dual matrix from row-major entry buffers of `rows * cols`
/// doubles each. `dual` may be null for a zero dual part.
///
/// # Safety
///
/// `real` (and `dual` when non-null) must point to `rows * cols` readable
/// doubles; `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn dgi_matrix_new(
    rows: usize,
    cols: usize,
    real: *const f64,
    dual: *const f64,
    out: *mut *mut DgiMatrix,
) -> DgiStatus {
    if real.is_null() || out.is_null() {
        return DgiStatus::NullPointer;
    }
    let n = match rows.checked_mul(cols) {
        Some(n) if n > 0 => n,
        _ => return DgiStatus::InvalidArgument,
    };
    let real_slice = std::slice::from_raw_parts(real, n);
    let dual_vec;
    let dual_slice: &[f64] = if dual.is_null() {
        dual_vec = vec![0.0; n];
        &dual_vec
    } else {
        std::slice::from_raw_parts(dual, n)
    };
    guarded(|| {
        let built = RealMatrix::from_rows(rows, cols, real_slice).and_then(|r| {
            let d = RealMatrix::from_rows(rows, cols, dual_slice)?;
            DualMatrix::new(r, d)
        });
        match built {
            Ok(m) => {
                *out = Box::into_raw(Box::new(DgiMatrix(m)));
                DgiStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a handle created by this library. Null is ignored.
///
/// # Safety
///
/// `m` must be null or a handle previously returned by this library that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn dgi_matrix_free(m: *mut DgiMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of rows; 0 when the handle is null.
///
/// # Safety
///
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dgi_matrix_rows(m: *const DgiMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.rows())
}

/// Number of columns; 0 when the handle is null.
///
/// # Safety
///
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dgi_matrix_cols(m: *const DgiMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.cols())
}

/// Copies the matrix out in row-major order. Either destination may be
/// null to skip that part; non-null destinations need `rows * cols` slots.
///
/// # Safety
///
/// `m` must be a live handle; non-null destinations must point to
/// `rows * cols` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn dgi_matrix_copy(
    m: *const DgiMatrix,
    real_out: *mut f64,
    dual_out: *mut f64,
) -> DgiStatus {
    let Some(m) = m.as_ref() else {
        return DgiStatus::NullPointer;
    };
    let n = m.0.rows() * m.0.cols();
    if !real_out.is_null() {
        let dst = std::slice::from_raw_parts_mut(real_out, n);
        dst.copy_from_slice(&m.0.real().to_row_major());
    }
    if !dual_out.is_null() {
        let dst = std::slice::from_raw_parts_mut(dual_out, n);
        dst.copy_from_slice(&m.0.dual().to_row_major());
    }
    DgiStatus::Ok
}

/// Computes the requested generalized inverse. `kind` takes a `DgiKind`
/// value; `rank_tol <= 0` selects the default tolerance and `eq_tol <= 0`
/// derives it as `100 * rank_tol`.
///
/// # Safety
///
/// `m` must be a live handle and `out` a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn dgi_inverse(
    m: *const DgiMatrix,
    kind: c_int,
    rank_tol: f64,
    eq_tol: f64,
    out: *mut *mut DgiMatrix,
) -> DgiStatus {
    let Some(m) = m.as_ref() else {
        return DgiStatus::NullPointer;
    };
    if out.is_null() {
        return DgiStatus::NullPointer;
    }
    let Some(kind) = kind_of(kind) else {
        return DgiStatus::InvalidArgument;
    };
    guarded(|| {
        let tol = match tolerance_of(rank_tol, eq_tol) {
            Ok(t) => t,
            Err(e) => return status_of(&e),
        };
        let computed = match kind {
            InverseKind::Mpdgi => Ok(mpdgi(&m.0, &tol)),
            InverseKind::Dmpgi => dmpgi(&m.0, &tol).map(|r| r.inverse),
            InverseKind::Dggi => dggi(&m.0, &tol).map(|r| r.inverse),
            InverseKind::Dcgi => dcgi(&m.0, &tol).map(|r| r.inverse),
        };
        match computed {
            Ok(inv) => {
                *out = Box::into_raw(Box::new(DgiMatrix(inv)));
                DgiStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Writes 1 to `out` when the square dual matrix has dual index one (its
/// dual group and dual core inverses exist), 0 otherwise.
///
/// # Safety
///
/// `m` must be a live handle and `out` a valid pointer to an int slot.
#[no_mangle]
pub unsafe extern "C" fn dgi_dual_index_is_one(
    m: *const DgiMatrix,
    rank_tol: f64,
    eq_tol: f64,
    out: *mut c_int,
) -> DgiStatus {
    let Some(m) = m.as_ref() else {
        return DgiStatus::NullPointer;
    };
    if out.is_null() {
        return DgiStatus::NullPointer;
    }
    guarded(|| {
        let tol = match tolerance_of(rank_tol, eq_tol) {
            Ok(t) => t,
            Err(e) => return status_of(&e),
        };
        match dual_index_is_one(&m.0, &tol) {
            Ok(cert) => {
                *out = cert.dual_index_one as c_int;
                DgiStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Solves `Ah x = b` for a square `Ah` and a one-column `b`. The particular
/// solution is written to `out_particular`; `out_projector` (the matrix
/// `I - G Ah`), `out_consistent` and `out_error_norm` may each be null when
/// not wanted.
///
/// # Safety
///
/// `a` and `b` must be live handles; `out_particular` must be a valid
/// pointer to a handle slot; the optional out-pointers must be null or
/// valid.
#[no_mangle]
pub unsafe extern "C" fn dgi_solve(
    a: *const DgiMatrix,
    b: *const DgiMatrix,
    kind: c_int,
    rank_tol: f64,
    eq_tol: f64,
    out_particular: *mut *mut DgiMatrix,
    out_projector: *mut *mut DgiMatrix,
    out_consistent: *mut c_int,
    out_error_norm: *mut f64,
) -> DgiStatus {
    let (Some(a), Some(b)) = (a.as_ref(), b.as_ref()) else {
        return DgiStatus::NullPointer;
    };
    if out_particular.is_null() {
        return DgiStatus::NullPointer;
    }
    let Some(kind) = kind_of(kind) else {
        return DgiStatus::InvalidArgument;
    };
    guarded(|| {
        let tol = match tolerance_of(rank_tol, eq_tol) {
            Ok(t) => t,
            Err(e) => return status_of(&e),
        };
        let rhs = match DualVector::from_matrix(b.0.clone()) {
            Ok(v) => v,
            Err(e) => return status_of(&e),
        };
        match solve(&a.0, &rhs, kind, &tol) {
            Ok(res) => {
                *out_particular =
                    Box::into_raw(Box::new(DgiMatrix(res.particular.as_matrix().clone())));
                if !out_projector.is_null() {
                    *out_projector = Box::into_raw(Box::new(DgiMatrix(res.projector)));
                }
                if !out_consistent.is_null() {
                    *out_consistent = res.consistent as c_int;
                }
                if !out_error_norm.is_null() {
                    *out_error_norm = res.error_norm;
                }
                DgiStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Static description of a status code; never null.
#[no_mangle]
pub extern "C" fn dgi_status_message(status: DgiStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        DgiStatus::Ok => b"ok\0",
        DgiStatus::NullPointer => b"a required pointer argument was null\0",
        DgiStatus::InvalidArgument => b"an argument was out of domain\0",
        DgiStatus::ShapeMismatch => b"matrix shapes do not conform\0",
        DgiStatus::NotExist => b"the requested inverse does not exist\0",
        DgiStatus::NotSymmetric => b"the input is not symmetric\0",
        DgiStatus::Inconsistent => b"existence characterizations disagree near a rank boundary\0",
        DgiStatus::Internal => b"internal cross-check failure\0",
    };
    msg.as_ptr().cast()
}
