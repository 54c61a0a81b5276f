//! Generalized inverses of real matrices.
//!
//! Everything here reduces to one orthogonal decomposition. A square matrix
//! `A` of rank `r` can be written
//!
//! ```text
//! A = U * | SK  SL | * U^T,    S = diag(s1 >= ... >= sr > 0),
//!         |  0   0 |           K K^T + L L^T = I_r,
//! ```
//!
//! with `U` orthogonal. The Moore-Penrose inverse, the group inverse and the
//! core inverse are block formulas in `U`, `S`, `K`, `L`:
//!
//! ```text
//! A+   = U * | K^T S^-1  0 | * U^T
//!            | L^T S^-1  0 |
//! A#   = U * | K^-1 S^-1  K^-1 S^-1 K^-1 L | * U^T     (needs K invertible)
//!            |     0             0         |
//! A(c) = A# A A+ = U * | (SK)^-1  0 | * U^T            (needs K invertible)
//!                      |    0     0 |
//! ```
//!
//! `K` is invertible exactly when `A` has index one, i.e. `rank(A^2) =
//! rank(A)`, so one decomposition answers both the existence question and
//! the computation. All rank decisions share a single relative cutoff
//! derived from [`Tolerance`].

use nalgebra::DMatrix;

use crate::dualnum::RealMatrix;
use crate::error::{Error, Result};

// ── Tolerance policy ───────────────────────────────────────────────────────

/// Shared tolerance policy for rank decisions and approximate equality.
///
/// `rank_tol` is dimensionless: a singular value counts as nonzero when it
/// exceeds `rank_tol * max(rows, cols) * sigma_max`. `eq_tol` bounds
/// residuals in equality checks, scaled by `max(1, magnitude)` of the
/// quantities compared. The default `eq_tol` is `100 * rank_tol`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Tolerance {
    pub rank_tol: f64,
    pub eq_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        let rank_tol = f64::EPSILON * 64.0;
        Self {
            rank_tol,
            eq_tol: 100.0 * rank_tol,
        }
    }
}

impl Tolerance {
    pub fn new(rank_tol: f64, eq_tol: f64) -> Result<Self> {
        if !(rank_tol.is_finite() && rank_tol > 0.0 && eq_tol.is_finite() && eq_tol > 0.0) {
            return Err(Error::InvalidTolerance { rank_tol, eq_tol });
        }
        Ok(Self { rank_tol, eq_tol })
    }

    /// Same `rank_tol`, with `eq_tol` derived as `100 * rank_tol`.
    pub fn from_rank_tol(rank_tol: f64) -> Result<Self> {
        Self::new(rank_tol, 100.0 * rank_tol)
    }

    /// Singular-value cutoff for a matrix of the given shape and largest
    /// singular value. Zero for the zero matrix, so its rank is 0.
    pub fn cutoff(&self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        self.rank_tol * rows.max(cols) as f64 * sigma_max
    }

    /// Residual bound for an equality check between quantities of the given
    /// magnitude: `eq_tol * max(1, scale)`.
    pub fn eq_bound(&self, scale: f64) -> f64 {
        self.eq_tol * scale.max(1.0)
    }
}

// ── SVD plumbing ───────────────────────────────────────────────────────────

const JACOBI_MAX_SWEEPS: usize = 60;

/// One-sided Jacobi SVD for a tall-or-square matrix (`m >= n`): rotates
/// columns of `A` until they are mutually orthogonal, so `A V = W` with
/// orthogonal `V` and `W` of orthogonal columns; the column norms are the
/// singular values. Returns the full `m x m` orthogonal `U` (columns past
/// the rank complete the basis), descending singular values and full
/// `n x n` `V^T`.
///
/// A general-purpose SVD would be a dependency, but the rank cutoffs here
/// sit near `1e-14` and the decision logic needs the factorization
/// backward-stable to machine precision; one-sided Jacobi delivers that at
/// these sizes for little code.
fn jacobi_svd_tall(a: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let (m, n) = a.shape();
    debug_assert!(m >= n);
    let mut w = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n.saturating_sub(1) {
            for j in i + 1..n {
                let aa = w.column(i).dot(&w.column(i));
                let bb = w.column(j).dot(&w.column(j));
                let cc = w.column(i).dot(&w.column(j));
                if aa == 0.0 || bb == 0.0 || cc.abs() <= f64::EPSILON * (aa * bb).sqrt() {
                    continue;
                }
                rotated = true;
                // Rotation angle zeroing the (i, j) column dot product.
                let tau = (bb - aa) / (2.0 * cc);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + tau.hypot(1.0))
                };
                let cs = 1.0 / t.hypot(1.0);
                let sn = cs * t;
                for k in 0..m {
                    let (x, y) = (w[(k, i)], w[(k, j)]);
                    w[(k, i)] = cs * x - sn * y;
                    w[(k, j)] = sn * x + cs * y;
                }
                for k in 0..n {
                    let (x, y) = (v[(k, i)], v[(k, j)]);
                    v[(k, i)] = cs * x - sn * y;
                    v[(k, j)] = sn * x + cs * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());
    let sigma: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let w = w.select_columns(order.iter());
    let v = v.select_columns(order.iter());

    let mut u = DMatrix::<f64>::zeros(m, m);
    let mut filled = 0;
    for (j, &sv) in sigma.iter().enumerate() {
        if sv > 0.0 {
            u.column_mut(j).copy_from(&(w.column(j) / sv));
            filled = j + 1;
        }
    }
    // Complete the basis: greedily take the coordinate vector with the
    // largest residual, re-orthogonalized twice for stability.
    while filled < m {
        let mut best: Option<(f64, DMatrix<f64>)> = None;
        for k in 0..m {
            let mut cand = DMatrix::<f64>::zeros(m, 1);
            cand[(k, 0)] = 1.0;
            for _ in 0..2 {
                let basis = u.columns(0, filled);
                cand = &cand - basis * (basis.transpose() * &cand);
            }
            let norm = cand.norm();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, cand));
            }
        }
        let (norm, cand) = best.expect("nonzero candidate exists below full basis");
        u.column_mut(filled).copy_from(&(cand / norm));
        filled += 1;
    }

    (u, sigma, v.transpose())
}

/// Thin SVD with singular values sorted descending; the factor matrices are
/// permuted to match. `u` is `m x p`, `v_t` is `p x n` with `p = min(m, n)`,
/// so for square input `u` is a complete orthogonal basis.
fn svd_parts(
    m: &DMatrix<f64>,
    need_u: bool,
    need_vt: bool,
) -> (Option<DMatrix<f64>>, Vec<f64>, Option<DMatrix<f64>>) {
    let (rows, cols) = m.shape();
    let p = rows.min(cols);
    let (u, sigma, v_t) = if rows >= cols {
        jacobi_svd_tall(m)
    } else {
        let (u, sigma, v_t) = jacobi_svd_tall(&m.transpose());
        (v_t.transpose(), sigma, u.transpose())
    };
    (
        need_u.then(|| u.columns(0, p).clone_owned()),
        sigma,
        need_vt.then(|| v_t.rows(0, p).clone_owned()),
    )
}

fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    svd_parts(m, false, false).1
}

fn rank_from_values(values: &[f64], tol: &Tolerance, rows: usize, cols: usize) -> usize {
    let sigma_max = values.first().copied().unwrap_or(0.0);
    let cutoff = tol.cutoff(rows, cols, sigma_max);
    values.iter().filter(|&&s| s > cutoff).count()
}

/// Numerical rank: the number of singular values above the shared cutoff.
pub fn numerical_rank(a: &RealMatrix, tol: &Tolerance) -> usize {
    let values = singular_values(a.dm());
    rank_from_values(&values, tol, a.rows(), a.cols())
}

/// Entry-wise compensated evaluation of `I - A X`: every dot product runs
/// through an FMA two-product with Neumaier accumulation, so the residual
/// keeps relative accuracy even when `A X` is within rounding of `I`. An
/// ordinarily evaluated residual rounds to noise of size
/// `eps * |A| * |X|`, which is exactly the signal refinement must see.
pub(crate) fn residual_identity_compensated(a: &DMatrix<f64>, x: &DMatrix<f64>) -> DMatrix<f64> {
    let m = a.nrows();
    let k = a.ncols();
    let mut out = DMatrix::zeros(m, m);
    for j in 0..m {
        for i in 0..m {
            let mut sum = if i == j { 1.0 } else { 0.0 };
            let mut comp = 0.0;
            for l in 0..k {
                let p = -a[(i, l)] * x[(l, j)];
                let p_err = (-a[(i, l)]).mul_add(x[(l, j)], -p);
                let t = sum + p;
                let s_err = if sum.abs() >= p.abs() {
                    (sum - t) + p
                } else {
                    (p - t) + sum
                };
                sum = t;
                comp += s_err + p_err;
            }
            out[(i, j)] = sum + comp;
        }
    }
    out
}

/// One Newton-Schulz step `X <- X + X (I - A X)` on the compensated
/// residual. Written as `2X - XAX`, the step stays inside the computed row
/// and column spaces of `X` and contracts the core-space forward error of a
/// `{1,2}`-inverse candidate from `eps * kappa(A)` toward `eps`; without the
/// compensated residual the step would be a no-op, since the information it
/// feeds on is below ordinary rounding. Rank decisions are never revisited
/// here.
fn refine_inverse_step(a: &DMatrix<f64>, x: &DMatrix<f64>) -> DMatrix<f64> {
    let e = residual_identity_compensated(a, x);
    x + x * e
}

/// Moore-Penrose pseudoinverse via SVD truncated at the shared cutoff,
/// polished by one refinement step. The pseudoinverse of the zero matrix is
/// the transposed zero matrix.
pub fn pinv(a: &RealMatrix, tol: &Tolerance) -> RealMatrix {
    let (m, n) = (a.rows(), a.cols());
    let (u_opt, s, vt_opt) = svd_parts(a.dm(), true, true);
    let r = rank_from_values(&s, tol, m, n);
    if r == 0 {
        return RealMatrix::from_dm(DMatrix::zeros(n, m));
    }
    let u = u_opt.expect("svd requested u");
    let vt = vt_opt.expect("svd requested v_t");
    // A+ = V_r S_r^-1 U_r^T
    let mut ut_scaled = u.columns(0, r).transpose();
    for (i, &sv) in s.iter().take(r).enumerate() {
        ut_scaled.row_mut(i).scale_mut(1.0 / sv);
    }
    let x = vt.rows(0, r).transpose() * ut_scaled;
    RealMatrix::from_dm(refine_inverse_step(a.dm(), &x))
}

/// True when `rank(A^2) = rank(A)`, i.e. `A` has index at most one.
///
/// The rank of `A^2` is measured against the cutoff for the scale
/// `sigma_max(A)^2`: a nilpotent `A` squares to rounding noise, and a
/// cutoff relative to that noise's own largest singular value would count
/// it as nonzero rank.
pub fn index_is_one(a: &RealMatrix, tol: &Tolerance) -> Result<bool> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let values = singular_values(a.dm());
    let sigma_max = values.first().copied().unwrap_or(0.0);
    let rank_a = values
        .iter()
        .filter(|&&s| s > tol.cutoff(n, n, sigma_max))
        .count();
    let a2 = a.dm() * a.dm();
    let cutoff_a2 = tol.cutoff(n, n, sigma_max * sigma_max);
    let rank_a2 = singular_values(&a2)
        .iter()
        .filter(|&&s| s > cutoff_a2)
        .count();
    Ok(rank_a2 == rank_a)
}

// ── Hartwig decomposition ──────────────────────────────────────────────────

/// Orthogonal block decomposition `A = U [SK SL; 0 0] U^T` of a square
/// matrix, with `S = diag(sigma)` and `K K^T + L L^T = I_r`.
///
/// `k` is `r x r` and `l` is `r x (n - r)`; for rank zero both are empty and
/// `u` is the identity.
#[derive(Debug, Clone)]
pub struct HartwigDecomposition {
    /// Orthogonal `n x n` basis.
    pub u: RealMatrix,
    /// Positive singular values of `A`, descending; length `r`.
    pub sigma: Vec<f64>,
    /// `r x r` block; invertible exactly when `A` has index one.
    pub k: RealMatrix,
    /// `r x (n - r)` block.
    pub l: RealMatrix,
    /// Numerical rank `r` of `A`.
    pub rank: usize,
}

/// Computes the decomposition: `U` stacks the left singular vectors of `A`
/// (a complete orthogonal basis), the top `r` rows of `U^T A U` then split
/// as `[SK SL]`, and `K`, `L` follow by scaling those rows with `1/sigma_i`.
pub fn hartwig_decompose(a: &RealMatrix, tol: &Tolerance) -> Result<HartwigDecomposition> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let (u_opt, s, _) = svd_parts(a.dm(), true, false);
    let r = rank_from_values(&s, tol, n, n);
    if r == 0 {
        return Ok(HartwigDecomposition {
            u: RealMatrix::identity(n)?,
            sigma: Vec::new(),
            k: RealMatrix::from_dm(DMatrix::zeros(0, 0)),
            l: RealMatrix::from_dm(DMatrix::zeros(0, n)),
            rank: 0,
        });
    }
    let u = u_opt.expect("svd requested u");
    let m = u.transpose() * a.dm() * &u;
    let mut k = m.view((0, 0), (r, r)).into_owned();
    let mut l = m.view((0, r), (r, n - r)).into_owned();
    for (i, &sv) in s.iter().take(r).enumerate() {
        k.row_mut(i).scale_mut(1.0 / sv);
        l.row_mut(i).scale_mut(1.0 / sv);
    }
    Ok(HartwigDecomposition {
        u: RealMatrix::from_dm(u),
        sigma: s[..r].to_vec(),
        k: RealMatrix::from_dm(k),
        l: RealMatrix::from_dm(l),
        rank: r,
    })
}

impl HartwigDecomposition {
    pub fn n(&self) -> usize {
        self.u.rows()
    }

    /// The `r x r` block `S K`.
    pub fn sigma_k(&self) -> DMatrix<f64> {
        let mut sk = self.k.dm().clone();
        for i in 0..self.rank {
            sk.row_mut(i).scale_mut(self.sigma[i]);
        }
        sk
    }

    /// The `r x (n - r)` block `S L`.
    pub fn sigma_l(&self) -> DMatrix<f64> {
        let mut sl = self.l.dm().clone();
        for i in 0..self.rank {
            sl.row_mut(i).scale_mut(self.sigma[i]);
        }
        sl
    }

    /// `U [TL TR; 0 0] U^T` for `r x r` `TL` and `r x (n - r)` `TR`.
    pub(crate) fn assemble(&self, tl: &DMatrix<f64>, tr: &DMatrix<f64>) -> RealMatrix {
        let (n, r) = (self.n(), self.rank);
        let mut m = DMatrix::zeros(n, n);
        m.view_mut((0, 0), (r, r)).copy_from(tl);
        m.view_mut((0, r), (r, n - r)).copy_from(tr);
        let u = self.u.dm();
        RealMatrix::from_dm(u * m * u.transpose())
    }

    /// `U [SK SL; 0 0] U^T`; equals `A` up to rounding and rank truncation.
    pub fn reconstruct(&self) -> RealMatrix {
        self.assemble(&self.sigma_k(), &self.sigma_l())
    }

    /// Max-abs residual of `U^T U - I`.
    pub fn orthogonality_residual(&self) -> f64 {
        let u = self.u.dm();
        let n = self.n();
        (u.transpose() * u - DMatrix::identity(n, n)).amax()
    }

    /// Max-abs residual of `K K^T + L L^T - I_r`; 0 for rank zero.
    pub fn kkt_plus_llt_residual(&self) -> f64 {
        if self.rank == 0 {
            return 0.0;
        }
        let k = self.k.dm();
        let l = self.l.dm();
        (k * k.transpose() + l * l.transpose() - DMatrix::identity(self.rank, self.rank)).amax()
    }

    /// Smallest and largest singular value of `K`, with the cutoff deciding
    /// invertibility. Rank zero counts as invertible (empty `K`). The
    /// cutoff is absolute: `K K^T + L L^T = I` pins the scale of `K` at
    /// one, and a cutoff relative to `sigma_max(K)` would declare an
    /// all-zero `K` invertible.
    pub fn k_singular_bounds(&self, tol: &Tolerance) -> (f64, f64, f64) {
        if self.rank == 0 {
            return (f64::INFINITY, f64::INFINITY, 0.0);
        }
        let s = singular_values(self.k.dm());
        let sigma_max = s[0];
        let sigma_min = s[s.len() - 1];
        (sigma_min, sigma_max, tol.cutoff(self.rank, self.rank, 1.0))
    }

    /// True when `K` is numerically invertible, i.e. `A` has index one.
    pub fn k_is_invertible(&self, tol: &Tolerance) -> bool {
        let (sigma_min, _, cutoff) = self.k_singular_bounds(tol);
        sigma_min > cutoff
    }

    fn k_inverse(&self, tol: &Tolerance) -> Result<DMatrix<f64>> {
        let (sigma_min, _, cutoff) = self.k_singular_bounds(tol);
        if sigma_min <= cutoff {
            return Err(Error::GroupInverseNotExist { sigma_min, cutoff });
        }
        self.k
            .dm()
            .clone()
            .try_inverse()
            .ok_or(Error::GroupInverseNotExist { sigma_min, cutoff })
    }

    /// Moore-Penrose inverse from the blocks: `U [K^T S^-1 0; L^T S^-1 0] U^T`.
    pub fn pinv(&self) -> RealMatrix {
        let (n, r) = (self.n(), self.rank);
        let mut kt_s = self.k.dm().transpose();
        let mut lt_s = self.l.dm().transpose();
        for j in 0..r {
            kt_s.column_mut(j).scale_mut(1.0 / self.sigma[j]);
            lt_s.column_mut(j).scale_mut(1.0 / self.sigma[j]);
        }
        let mut m = DMatrix::zeros(n, n);
        m.view_mut((0, 0), (r, r)).copy_from(&kt_s);
        m.view_mut((r, 0), (n - r, r)).copy_from(&lt_s);
        let u = self.u.dm();
        RealMatrix::from_dm(u * m * u.transpose())
    }

    /// Group inverse `U [K^-1 S^-1, K^-1 S^-1 K^-1 L; 0 0] U^T`.
    pub fn group_inverse(&self, tol: &Tolerance) -> Result<RealMatrix> {
        let kinv = self.k_inverse(tol)?;
        let mut kinv_sinv = kinv.clone();
        for j in 0..self.rank {
            kinv_sinv.column_mut(j).scale_mut(1.0 / self.sigma[j]);
        }
        let tr = &kinv_sinv * &kinv * self.l.dm();
        Ok(self.assemble(&kinv_sinv, &tr))
    }

    /// Core inverse in block form, `U [(SK)^-1 0; 0 0] U^T`.
    pub fn core_inverse_block(&self, tol: &Tolerance) -> Result<RealMatrix> {
        let (sigma_min, _, cutoff) = self.k_singular_bounds(tol);
        if sigma_min <= cutoff {
            return Err(Error::CoreInverseNotExist { sigma_min, cutoff });
        }
        let skinv = self
            .sigma_k()
            .try_inverse()
            .ok_or(Error::CoreInverseNotExist { sigma_min, cutoff })?;
        let tr = DMatrix::zeros(self.rank, self.n() - self.rank);
        Ok(self.assemble(&skinv, &tr))
    }
}

/// Group inverse of a square index-one matrix, polished by one refinement
/// step.
pub fn group_inverse(a: &RealMatrix, tol: &Tolerance) -> Result<RealMatrix> {
    let x = hartwig_decompose(a, tol)?.group_inverse(tol)?;
    Ok(RealMatrix::from_dm(refine_inverse_step(a.dm(), x.dm())))
}

/// Core inverse of a square index-one matrix.
///
/// Evaluated through two distinct formulas, the product `A# A A+` and the
/// block form `U [(SK)^-1 0; 0 0] U^T`; the block result is returned after
/// both are required to agree within `eq_tol`.
pub fn core_inverse(a: &RealMatrix, tol: &Tolerance) -> Result<RealMatrix> {
    let h = hartwig_decompose(a, tol)?;
    let raw_block = h.core_inverse_block(tol).map_err(|e| match e {
        Error::GroupInverseNotExist { sigma_min, cutoff } => {
            Error::CoreInverseNotExist { sigma_min, cutoff }
        }
        other => other,
    })?;
    // Refining both routes keeps their agreement bound independent of the
    // conditioning of `A`.
    let block = RealMatrix::from_dm(refine_inverse_step(a.dm(), raw_block.dm()));
    let raw_product = group_inverse(a, tol)?
        .matmul(a)?
        .matmul(&pinv(a, tol))?;
    let product = RealMatrix::from_dm(refine_inverse_step(a.dm(), raw_product.dm()));
    let residual = block.max_abs_diff(&product);
    let bound = tol.eq_bound(block.max_abs().max(product.max_abs()));
    if residual > bound {
        return Err(Error::InternalFormulaMismatch {
            check: "core inverse: product form vs block form",
            residual,
            bound,
        });
    }
    Ok(block)
}
