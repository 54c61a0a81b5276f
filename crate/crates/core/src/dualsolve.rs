//! Solving linear systems `Ah x = b` over the dual numbers.
//!
//! Given a generalized inverse `G` of `Ah`, every solution of a consistent
//! system has the form
//!
//! ```text
//! x = G b + (I - G Ah) w,    w arbitrary,
//! ```
//!
//! and for an inconsistent system `x = G b` minimizes the residual in the
//! appropriate sense when `G` satisfies the first and third Penrose
//! equations (the DMPGI does; the DCGI is a usable opt-in alternative).
//! Residual sizes are measured with the angle norm `||p|| + ||q||`, which
//! stays meaningful when the real part of the residual vanishes.

use crate::dualginv::{dcgi, dggi, dmpgi, mpdgi, InverseKind};
use crate::dualnum::{DualMatrix, DualVector};
use crate::error::{Error, Result};
use crate::realginv::Tolerance;

/// Outcome of [`solve`]: a particular solution, the homogeneous-solution
/// projector, and the consistency verdict.
#[derive(Debug, Clone)]
pub struct DualSolveResult {
    /// `G b`, the particular solution.
    pub particular: DualVector,
    /// `I - G Ah`; adding `(I - G Ah) w` to the particular solution sweeps
    /// the full solution set of a consistent system.
    pub projector: DualMatrix,
    /// Whether `Ah x = b` holds at the particular solution within `eq_tol`.
    pub consistent: bool,
    /// Angle norm of `Ah x - b` at the particular solution.
    pub error_norm: f64,
    /// Which inverse produced `G`.
    pub inverse_kind: InverseKind,
}

/// Solves `Ah x = b` with the requested generalized inverse of the square
/// matrix `Ah`. Errors propagate from the inverse computation, including
/// typed nonexistence; shape mismatches between `Ah` and `b` are rejected.
pub fn solve(
    ah: &DualMatrix,
    b: &DualVector,
    kind: InverseKind,
    tol: &Tolerance,
) -> Result<DualSolveResult> {
    if !ah.is_square() {
        return Err(Error::NotSquare {
            rows: ah.rows(),
            cols: ah.cols(),
        });
    }
    if b.len() != ah.rows() {
        return Err(Error::DimensionMismatch {
            op: "solve",
            lhs: (ah.rows(), ah.cols()),
            rhs: (b.len(), 1),
        });
    }
    let g = match kind {
        InverseKind::Mpdgi => mpdgi(ah, tol),
        InverseKind::Dmpgi => dmpgi(ah, tol)?.inverse,
        InverseKind::Dggi => dggi(ah, tol)?.inverse,
        InverseKind::Dcgi => dcgi(ah, tol)?.inverse,
    };
    let particular = g.mul_vector(b)?;
    let projector = DualMatrix::identity(ah.rows())?.sub(&g.matmul(ah)?)?;
    let error_norm = residual_norm(ah, &particular, b)?;
    let scale = 1.0_f64.max(ah.max_abs()).max(b.as_matrix().max_abs());
    let consistent = error_norm <= tol.eq_bound(scale);
    Ok(DualSolveResult {
        particular,
        projector,
        consistent,
        error_norm,
        inverse_kind: kind,
    })
}

/// Angle norm of the residual `Ah x - b` for any conforming shapes.
pub fn residual_norm(ah: &DualMatrix, x: &DualVector, b: &DualVector) -> Result<f64> {
    if x.len() != ah.cols() || b.len() != ah.rows() {
        return Err(Error::DimensionMismatch {
            op: "residual_norm",
            lhs: (ah.rows(), ah.cols()),
            rhs: (x.len(), b.len()),
        });
    }
    Ok(ah.mul_vector(x)?.sub(b)?.angle_norm())
}
