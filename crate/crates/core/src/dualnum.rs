//! Dual scalars, matrices and vectors.
//!
//! A dual number is `a + eps*b` where the infinitesimal unit satisfies
//! `eps^2 = 0`. A dual matrix is `A + eps*B` with real matrices `A` (the
//! real part) and `B` (the dual part) of identical shape. All dual
//! arithmetic in this crate drops the `eps^2` term structurally, so the
//! nilpotency rule holds exactly in floating point:
//!
//! ```text
//! (A + eps*B)(C + eps*D) = AC + eps*(AD + BC)
//! ```
//!
//! Matrices are stored dense in `f64`. Constructors take row-major entry
//! order and reject non-finite values, so downstream code never has to
//! re-check for NaN or infinity.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

// ── Dual scalars ───────────────────────────────────────────────────────────

/// A dual number `real + eps*dual` with `eps^2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DualScalar {
    pub real: f64,
    pub dual: f64,
}

impl DualScalar {
    pub fn new(real: f64, dual: f64) -> Self {
        Self { real, dual }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0)
    }

    /// True when both parts differ by at most `tol * max(1, |self| entrywise)`.
    pub fn approx_eq(&self, other: &DualScalar, tol: f64) -> bool {
        let scale = 1.0_f64.max(self.real.abs()).max(self.dual.abs());
        (self.real - other.real).abs() <= tol * scale
            && (self.dual - other.dual).abs() <= tol * scale
    }
}

impl std::ops::Add for DualScalar {
    type Output = DualScalar;
    fn add(self, rhs: DualScalar) -> DualScalar {
        DualScalar::new(self.real + rhs.real, self.dual + rhs.dual)
    }
}

impl std::ops::Sub for DualScalar {
    type Output = DualScalar;
    fn sub(self, rhs: DualScalar) -> DualScalar {
        DualScalar::new(self.real - rhs.real, self.dual - rhs.dual)
    }
}

impl std::ops::Mul for DualScalar {
    type Output = DualScalar;
    /// `(a + eps*b)(c + eps*d) = ac + eps*(ad + bc)`; the `bd` term is never formed.
    fn mul(self, rhs: DualScalar) -> DualScalar {
        DualScalar::new(
            self.real * rhs.real,
            self.real * rhs.dual + self.dual * rhs.real,
        )
    }
}

impl std::ops::Neg for DualScalar {
    type Output = DualScalar;
    fn neg(self) -> DualScalar {
        DualScalar::new(-self.real, -self.dual)
    }
}

impl std::fmt::Display for DualScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.dual.is_sign_negative() {
            write!(f, "{} - {}e", self.real, -self.dual)
        } else {
            write!(f, "{} + {}e", self.real, self.dual)
        }
    }
}

// ── Real matrices ──────────────────────────────────────────────────────────

/// A dense real matrix with finite entries.
///
/// Thin wrapper around [`nalgebra::DMatrix<f64>`]; the wrapper guarantees
/// that every entry admitted through a public constructor is finite.
///
/// # Example
///
/// ```
/// use dualinv::dualnum::RealMatrix;
///
/// let a = RealMatrix::from_rows(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
/// assert_eq!(a.get(1, 0), 3.0);
/// assert_eq!(a.transpose().get(0, 1), 3.0);
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix(DMatrix<f64>);

impl RealMatrix {
    /// Builds a matrix from row-major entries. Rejects empty shapes,
    /// mismatched entry counts and non-finite values.
    pub fn from_rows(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(Error::BadEntryCount {
                rows,
                cols,
                expected: rows * cols,
                got: entries.len(),
            });
        }
        for (idx, &v) in entries.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry {
                    row: idx / cols,
                    col: idx % cols,
                    value: v,
                });
            }
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, entries)))
    }

    /// Builds a matrix from nested rows, e.g. parsed JSON. Rejects ragged rows.
    pub fn from_nested(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if nrows == 0 || ncols == 0 {
            return Err(Error::EmptyMatrix {
                rows: nrows,
                cols: ncols,
            });
        }
        let mut flat = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::BadEntryCount {
                    rows: nrows,
                    cols: ncols,
                    expected: nrows * ncols,
                    got: row.len() + (flat.len() / ncols) * ncols,
                });
            }
            flat.extend_from_slice(row);
        }
        Self::from_rows(nrows, ncols, &flat)
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        Ok(Self(DMatrix::zeros(rows, cols)))
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix { rows: n, cols: n });
        }
        Ok(Self(DMatrix::identity(n, n)))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    /// Entry at `(row, col)`. Panics when out of bounds, like indexing a slice.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[(row, col)]
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<f64> {
        let (r, c) = (self.rows(), self.cols());
        let mut out = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    /// Entries as nested rows, convenient for serialization.
    pub fn to_nested(&self) -> Vec<Vec<f64>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    pub fn transpose(&self) -> RealMatrix {
        RealMatrix(self.0.transpose())
    }

    /// Checked product; the inner dimensions must agree.
    pub fn matmul(&self, rhs: &RealMatrix) -> Result<RealMatrix> {
        if self.cols() != rhs.rows() {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                lhs: (self.rows(), self.cols()),
                rhs: (rhs.rows(), rhs.cols()),
            });
        }
        Ok(RealMatrix(&self.0 * &rhs.0))
    }

    pub fn add(&self, rhs: &RealMatrix) -> Result<RealMatrix> {
        self.require_same_shape(rhs, "add")?;
        Ok(RealMatrix(&self.0 + &rhs.0))
    }

    pub fn sub(&self, rhs: &RealMatrix) -> Result<RealMatrix> {
        self.require_same_shape(rhs, "sub")?;
        Ok(RealMatrix(&self.0 - &rhs.0))
    }

    fn require_same_shape(&self, rhs: &RealMatrix, op: &'static str) -> Result<()> {
        if self.rows() != rhs.rows() || self.cols() != rhs.cols() {
            return Err(Error::DimensionMismatch {
                op,
                lhs: (self.rows(), self.cols()),
                rhs: (rhs.rows(), rhs.cols()),
            });
        }
        Ok(())
    }

    pub fn scale(&self, factor: f64) -> RealMatrix {
        RealMatrix(&self.0 * factor)
    }

    pub fn neg(&self) -> RealMatrix {
        self.scale(-1.0)
    }

    /// Largest absolute entry; 0 for a degenerate empty shape.
    pub fn max_abs(&self) -> f64 {
        if self.0.is_empty() {
            0.0
        } else {
            self.0.amax()
        }
    }

    /// Frobenius norm of the difference to `rhs`; infinity when shapes differ.
    pub fn max_abs_diff(&self, rhs: &RealMatrix) -> f64 {
        if self.rows() != rhs.rows() || self.cols() != rhs.cols() {
            return f64::INFINITY;
        }
        let mut worst = 0.0_f64;
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                worst = worst.max((self.0[(i, j)] - rhs.0[(i, j)]).abs());
            }
        }
        worst
    }

    /// True when the max-abs difference is within `tol * max(1, self.max_abs())`.
    pub fn approx_eq(&self, rhs: &RealMatrix, tol: f64) -> bool {
        self.max_abs_diff(rhs) <= tol * 1.0_f64.max(self.max_abs())
    }

    /// Euclidean norm of a single-column matrix; general Frobenius norm otherwise.
    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub(crate) fn dm(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub(crate) fn from_dm(m: DMatrix<f64>) -> Self {
        Self(m)
    }
}

// ── Dual matrices ──────────────────────────────────────────────────────────

/// A dual matrix `real + eps*dual`; both parts share one shape.
///
/// # Example
///
/// ```
/// use dualinv::dualnum::{DualMatrix, RealMatrix};
///
/// let a = RealMatrix::from_rows(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
/// let b = RealMatrix::from_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
/// let ab = DualMatrix::new(a, b).unwrap();
/// let sq = ab.matmul(&ab).unwrap();
/// // (A + eps*B)^2 = A^2 + eps*(AB + BA)
/// assert_eq!(sq.dual().get(0, 1), 1.0);
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct DualMatrix {
    real: RealMatrix,
    dual: RealMatrix,
}

impl DualMatrix {
    pub fn new(real: RealMatrix, dual: RealMatrix) -> Result<Self> {
        if real.rows() != dual.rows() || real.cols() != dual.cols() {
            return Err(Error::DimensionMismatch {
                op: "dual parts",
                lhs: (real.rows(), real.cols()),
                rhs: (dual.rows(), dual.cols()),
            });
        }
        Ok(Self { real, dual })
    }

    /// Embeds a real matrix with zero dual part.
    pub fn from_real(real: RealMatrix) -> Self {
        let dual = RealMatrix(DMatrix::zeros(real.rows(), real.cols()));
        Self { real, dual }
    }

    /// Crate-internal constructor for parts whose shapes are known to agree.
    pub(crate) fn from_parts_unchecked(real: RealMatrix, dual: RealMatrix) -> Self {
        debug_assert_eq!((real.rows(), real.cols()), (dual.rows(), dual.cols()));
        Self { real, dual }
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Ok(Self::from_real(RealMatrix::zeros(rows, cols)?))
    }

    pub fn identity(n: usize) -> Result<Self> {
        Ok(Self::from_real(RealMatrix::identity(n)?))
    }

    pub fn real(&self) -> &RealMatrix {
        &self.real
    }

    pub fn dual(&self) -> &RealMatrix {
        &self.dual
    }

    pub fn into_parts(self) -> (RealMatrix, RealMatrix) {
        (self.real, self.dual)
    }

    pub fn rows(&self) -> usize {
        self.real.rows()
    }

    pub fn cols(&self) -> usize {
        self.real.cols()
    }

    pub fn is_square(&self) -> bool {
        self.real.is_square()
    }

    /// Dual product `(A + eps*B)(C + eps*D) = AC + eps*(AD + BC)`.
    ///
    /// The `eps^2` term `BD` is never formed, so the product of two purely
    /// dual matrices is exactly zero.
    pub fn matmul(&self, rhs: &DualMatrix) -> Result<DualMatrix> {
        if self.cols() != rhs.rows() {
            return Err(Error::DimensionMismatch {
                op: "dual matmul",
                lhs: (self.rows(), self.cols()),
                rhs: (rhs.rows(), rhs.cols()),
            });
        }
        let real = &self.real.0 * &rhs.real.0;
        let dual = &self.real.0 * &rhs.dual.0 + &self.dual.0 * &rhs.real.0;
        Ok(DualMatrix {
            real: RealMatrix(real),
            dual: RealMatrix(dual),
        })
    }

    /// Componentwise transpose: `(A + eps*B)^T = A^T + eps*B^T`.
    pub fn transpose(&self) -> DualMatrix {
        DualMatrix {
            real: self.real.transpose(),
            dual: self.dual.transpose(),
        }
    }

    pub fn add(&self, rhs: &DualMatrix) -> Result<DualMatrix> {
        Ok(DualMatrix {
            real: self.real.add(&rhs.real)?,
            dual: self.dual.add(&rhs.dual)?,
        })
    }

    pub fn sub(&self, rhs: &DualMatrix) -> Result<DualMatrix> {
        Ok(DualMatrix {
            real: self.real.sub(&rhs.real)?,
            dual: self.dual.sub(&rhs.dual)?,
        })
    }

    pub fn neg(&self) -> DualMatrix {
        DualMatrix {
            real: self.real.neg(),
            dual: self.dual.neg(),
        }
    }

    /// Largest absolute entry across both parts.
    pub fn max_abs(&self) -> f64 {
        self.real.max_abs().max(self.dual.max_abs())
    }

    /// Largest absolute entrywise difference across both parts; infinity when
    /// shapes differ.
    pub fn max_abs_diff(&self, rhs: &DualMatrix) -> f64 {
        self.real
            .max_abs_diff(&rhs.real)
            .max(self.dual.max_abs_diff(&rhs.dual))
    }

    /// True when both parts agree within `tol * max(1, self.max_abs())`.
    pub fn approx_eq(&self, rhs: &DualMatrix, tol: f64) -> bool {
        self.max_abs_diff(rhs) <= tol * 1.0_f64.max(self.max_abs())
    }

    /// Max-abs deviation from symmetry over both parts; a dual matrix is
    /// symmetric only when the real and the dual part each are.
    pub fn symmetry_residual(&self) -> f64 {
        self.max_abs_diff(&self.transpose())
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.symmetry_residual() <= tol * 1.0_f64.max(self.max_abs())
    }

    /// Applies the matrix to a dual vector.
    pub fn mul_vector(&self, v: &DualVector) -> Result<DualVector> {
        let out = self.matmul(v.as_matrix())?;
        Ok(DualVector(out))
    }
}

// ── Dual vectors ───────────────────────────────────────────────────────────

/// A dual column vector; a [`DualMatrix`] constrained to one column.
#[derive(Debug, Clone, PartialEq)]
pub struct DualVector(DualMatrix);

impl DualVector {
    /// Builds a vector from its real and dual coefficient slices.
    pub fn from_parts(real: &[f64], dual: &[f64]) -> Result<Self> {
        if real.len() != dual.len() {
            return Err(Error::DimensionMismatch {
                op: "dual vector parts",
                lhs: (real.len(), 1),
                rhs: (dual.len(), 1),
            });
        }
        let p = RealMatrix::from_rows(real.len(), 1, real)?;
        let q = RealMatrix::from_rows(dual.len(), 1, dual)?;
        Ok(Self(DualMatrix::new(p, q)?))
    }

    pub fn from_real(real: &[f64]) -> Result<Self> {
        let zeros = vec![0.0; real.len()];
        Self::from_parts(real, &zeros)
    }

    /// Wraps a single-column dual matrix.
    pub fn from_matrix(m: DualMatrix) -> Result<Self> {
        if m.cols() != 1 {
            return Err(Error::DimensionMismatch {
                op: "dual vector",
                lhs: (m.rows(), m.cols()),
                rhs: (m.rows(), 1),
            });
        }
        Ok(Self(m))
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Ok(Self(DualMatrix::zeros(n, 1)?))
    }

    pub fn len(&self) -> usize {
        self.0.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_matrix(&self) -> &DualMatrix {
        &self.0
    }

    pub fn real_slice(&self) -> Vec<f64> {
        self.0.real().to_row_major()
    }

    pub fn dual_slice(&self) -> Vec<f64> {
        self.0.dual().to_row_major()
    }

    pub fn get(&self, i: usize) -> DualScalar {
        DualScalar::new(self.0.real().get(i, 0), self.0.dual().get(i, 0))
    }

    pub fn sub(&self, rhs: &DualVector) -> Result<DualVector> {
        Ok(DualVector(self.0.sub(&rhs.0)?))
    }

    pub fn max_abs_diff(&self, rhs: &DualVector) -> f64 {
        self.0.max_abs_diff(&rhs.0)
    }

    pub fn approx_eq(&self, rhs: &DualVector, tol: f64) -> bool {
        self.0.approx_eq(&rhs.0, tol)
    }

    /// Squared dual norm `||p + eps*q||^2 = ||p||^2 + 2*eps*(p.q)`.
    ///
    /// The dual part carries no quadratic `q` contribution because
    /// `eps^2 = 0`.
    pub fn norm_squared(&self) -> DualScalar {
        let p = self.0.real();
        let q = self.0.dual();
        let mut pp = 0.0;
        let mut pq = 0.0;
        for i in 0..self.len() {
            pp += p.get(i, 0) * p.get(i, 0);
            pq += p.get(i, 0) * q.get(i, 0);
        }
        DualScalar::new(pp, 2.0 * pq)
    }

    /// Angle norm `||p||_2 + ||q||_2`.
    ///
    /// Unlike the square root of [`norm_squared`](Self::norm_squared), this
    /// stays finite and meaningful when the real part vanishes, so it is the
    /// error measure used by the solver.
    pub fn angle_norm(&self) -> f64 {
        self.0.real().frobenius_norm() + self.0.dual().frobenius_norm()
    }
}
