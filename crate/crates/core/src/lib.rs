//! Numerical generalized inverses of dual matrices.
//!
//! A dual matrix is `Ah = A + eps*B` with real `A`, `B` and a nilpotent
//! unit `eps` (`eps^2 = 0`). Such matrices encode first-order perturbations
//! and screw-theoretic quantities; inverting them is subtler than the real
//! case because most dual matrices have no exact inverse of a given kind.
//! This crate computes the four standard candidates and is explicit about
//! existence:
//!
//! * [`dualginv::mpdgi`]: the always-defined `A+ - eps*A+ B A+`,
//! * [`dualginv::dmpgi`]: the dual Moore-Penrose inverse,
//! * [`dualginv::dggi`]: the dual group inverse,
//! * [`dualginv::dcgi`]: the dual core inverse,
//!
//! together with existence certificates ([`dualginv::dual_index_is_one`]),
//! special-form classification ([`dualginv::classify_special_forms`]),
//! symmetric-case identities ([`dualginv::symmetric_identities`]) and a
//! linear solver ([`dualsolve::solve`]).
//!
//! The real-matrix kernel lives in [`realginv`]: numerical rank, the
//! Moore-Penrose pseudoinverse and the Hartwig block decomposition
//! underlying the group and core inverses. [`dualnum`] provides the dual
//! scalar/matrix/vector arithmetic with exact `eps^2 = 0` semantics.
//!
//! All rank and equality decisions flow through one [`realginv::Tolerance`]
//! policy. Nonexistence is a typed, evidence-carrying error, never a panic;
//! inputs too close to a rank boundary for the certificate's independent
//! characterizations to agree are reported as such.
//!
//! A command line front end (`dualinv`) exposes the same operations on JSON
//! matrix files.

pub mod dualginv;
pub mod dualnum;
pub mod dualsolve;
pub mod error;
pub mod realginv;

pub use dualginv::{DualGinvResult, ExistenceCertificate, InverseKind, SpecialForms};
pub use dualnum::{DualMatrix, DualScalar, DualVector, RealMatrix};
pub use dualsolve::DualSolveResult;
pub use error::{Error, Result};
pub use realginv::Tolerance;
