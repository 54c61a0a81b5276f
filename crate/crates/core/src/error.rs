//! Error types shared by every module in the crate.

use thiserror::Error;

use crate::dualginv::ExistenceCertificate;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Typed failures for construction, decomposition and inverse computation.
///
/// Nonexistence of an inverse is a regular, expected outcome and carries the
/// numerical evidence for the verdict (offending singular value, projector
/// residual or a full [`ExistenceCertificate`]). `InconsistentCertificate`
/// and `InternalFormulaMismatch` are diagnostics: they flag inputs so close
/// to a rank boundary that independent characterizations of the same
/// property stopped agreeing, or an internal cross-check that failed.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: left is {lhs:?}, right is {rhs:?}")]
    DimensionMismatch {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix entries must be finite, found {value} at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize, value: f64 },

    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {got}")]
    BadEntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },

    #[error("tolerances must be finite and positive: rank_tol={rank_tol}, eq_tol={eq_tol}")]
    InvalidTolerance { rank_tol: f64, eq_tol: f64 },

    #[error(
        "group inverse does not exist: index(A) > 1 \
         (smallest singular value {sigma_min:.3e} of K is below cutoff {cutoff:.3e})"
    )]
    GroupInverseNotExist { sigma_min: f64, cutoff: f64 },

    #[error(
        "core inverse does not exist: index(A) > 1 \
         (smallest singular value {sigma_min:.3e} of K is below cutoff {cutoff:.3e})"
    )]
    CoreInverseNotExist { sigma_min: f64, cutoff: f64 },

    #[error(
        "dual Moore-Penrose inverse does not exist: \
         (I - AA+)B(I - A+A) has max-abs entry {projector_residual:.3e} \
         and rank([B A; A 0]) - 2 rank(A) = {rank_gap}"
    )]
    DmpgiNotExist {
        projector_residual: f64,
        rank_gap: i64,
    },

    #[error("dual group inverse does not exist: {certificate}")]
    DggiNotExist { certificate: ExistenceCertificate },

    #[error("dual core inverse does not exist: {certificate}")]
    DcgiNotExist { certificate: ExistenceCertificate },

    #[error("matrix is not symmetric: max-abs asymmetry {residual:.3e} exceeds {bound:.3e}")]
    NotSymmetric { residual: f64, bound: f64 },

    #[error(
        "existence characterizations disagree near the decision threshold ({context}); \
         tighten or loosen the tolerances, or move the input away from the rank boundary"
    )]
    InconsistentCertificate { context: String },

    #[error(
        "internal cross-check `{check}` failed: residual {residual:.3e} exceeds bound {bound:.3e}; \
         the input may sit near a rank boundary or eq_tol may be too tight for its conditioning"
    )]
    InternalFormulaMismatch {
        check: &'static str,
        residual: f64,
        bound: f64,
    },
}
