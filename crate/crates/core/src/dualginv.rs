//! Generalized inverses of dual matrices.
//!
//! For a dual matrix `Ah = A + eps*B` there are four inverses of interest,
//! three of which may fail to exist:
//!
//! * **MPDGI** `A+ - eps*A+ B A+`: always defined, but not an inverse of
//!   `Ah` in general.
//! * **DMPGI** `Ah+`: the unique dual matrix satisfying all four Penrose
//!   equations. Exists iff `(I - AA+) B (I - A+A) = 0`, equivalently
//!   `rank([B A; A 0]) = 2 rank(A)`.
//! * **DGGI** `Ah#`: the dual group inverse of a square `Ah`. Exists iff
//!   `A` has index one and `(I - AA#) B (I - AA#) = 0`.
//! * **DCGI** `Ah(c)`: the dual core inverse, the unique `G` with
//!   `Ah G Ah = Ah`, `Ah G^2 = G` and `(Ah G)^T = Ah G`. It exists exactly
//!   when `Ah` has **dual index one**, which also characterizes DGGI
//!   existence: `rank(Ah^2) = rank(Ah)` in the dual sense.
//!
//! Existence questions are answered by an [`ExistenceCertificate`] that
//! evaluates four independent characterizations of dual index one and
//! insists they agree; disagreement near a rank boundary is reported as a
//! typed diagnostic instead of an arbitrary verdict. The DCGI is computed
//! along two independent routes (a closed formula in `A+`, `A#`, `A(c)` and
//! a block formula in the Hartwig basis) that must coincide.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;

use crate::dualnum::{DualMatrix, RealMatrix};
use crate::error::{Error, Result};
use crate::realginv::{
    group_inverse, hartwig_decompose, index_is_one, numerical_rank, pinv,
    residual_identity_compensated, Tolerance,
};

// ── Vocabulary types ───────────────────────────────────────────────────────

/// Which dual generalized inverse to compute or verify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InverseKind {
    Mpdgi,
    Dmpgi,
    Dggi,
    Dcgi,
}

impl InverseKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            InverseKind::Mpdgi => "mpdgi",
            InverseKind::Dmpgi => "dmpgi",
            InverseKind::Dggi => "dggi",
            InverseKind::Dcgi => "dcgi",
        }
    }
}

impl fmt::Display for InverseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for InverseKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mpdgi" => Ok(InverseKind::Mpdgi),
            "dmpgi" => Ok(InverseKind::Dmpgi),
            "dggi" => Ok(InverseKind::Dggi),
            "dcgi" => Ok(InverseKind::Dcgi),
            other => Err(format!(
                "unknown inverse kind `{other}`, expected one of mpdgi, dmpgi, dggi, dcgi"
            )),
        }
    }
}

/// Which formula produced a [`DualGinvResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaPath {
    /// Closed formula in `A+`, `A#` and `A(c)`.
    Compact,
    /// Block formula in the Hartwig basis.
    Block,
    /// Shortcut form valid under a special-form flag.
    SimpleForm,
}

impl fmt::Display for FormulaPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormulaPath::Compact => "compact",
            FormulaPath::Block => "block",
            FormulaPath::SimpleForm => "simple-form",
        })
    }
}

/// Numerical evidence for a dual-index-one decision on a square `A + eps*B`.
///
/// Four characterizations are evaluated: the two rank tests
/// `rank([B A; A 0]) = 2 rank(A)` and `rank([A, B(I - AA#)]) = rank(A)`,
/// and the two projector tests `(I - AA+) B (I - A+A) = 0` and
/// `(I - AA#) B (I - AA#) = 0`. The fields record each test's residual:
/// rank gaps as integers, projector residuals as max-abs entries measured
/// against `proj_zero_threshold`. The group-inverse based residuals are
/// `None` when `A` itself does not have index one (no `A#` exists).
///
/// Invariant: when `index_a_one` is true the four derived booleans agree;
/// an input too close to a rank boundary for them to agree is rejected with
/// [`Error::InconsistentCertificate`] instead of being guessed at.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ExistenceCertificate {
    pub dual_index_one: bool,
    pub index_a_one: bool,
    pub rank_a: usize,
    pub residual_rank_block: i64,
    pub residual_rank_aug: Option<i64>,
    pub residual_proj_mp: f64,
    pub residual_proj_gp: Option<f64>,
    pub proj_zero_threshold: f64,
}

impl fmt::Display for ExistenceCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn opt_i(v: Option<i64>) -> String {
            v.map_or_else(|| "n/a".into(), |x| x.to_string())
        }
        fn opt_f(v: Option<f64>) -> String {
            v.map_or_else(|| "n/a".into(), |x| format!("{x:.3e}"))
        }
        write!(
            f,
            "dual index one: {}; index(A)=1: {}; rank(A)={}; \
             rank gap [B A; A 0]: {}; rank gap [A, B(I-AA#)]: {}; \
             |(I-AA+)B(I-A+A)|: {:.3e}; |(I-AA#)B(I-AA#)|: {}; threshold {:.3e}",
            self.dual_index_one,
            self.index_a_one,
            self.rank_a,
            self.residual_rank_block,
            opt_i(self.residual_rank_aug),
            self.residual_proj_mp,
            opt_f(self.residual_proj_gp),
            self.proj_zero_threshold,
        )
    }
}

/// Special closed forms a dual inverse may collapse to.
///
/// * `dmpgi_eq_mpdgi`: `(I - AA+)B = 0` and `B(I - A+A) = 0`, so the DMPGI
///   equals the MPDGI.
/// * `dcgi_simple`: index-one `A` with `(I - AA+)B = 0`, so the DCGI equals
///   `A(c) - eps*A(c) B A(c)`.
/// * `dggi_simple`: index-one `A` with `B(I - AA#) = 0` and
///   `(I - AA#)B = 0`, so the DGGI equals `A# - eps*A# B A#`.
///
/// The implications `dggi_simple => dmpgi_eq_mpdgi => dcgi_simple` hold for
/// every square dual matrix with index-one real part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct SpecialForms {
    pub dmpgi_eq_mpdgi: bool,
    pub dcgi_simple: bool,
    pub dggi_simple: bool,
}

/// A computed dual generalized inverse together with its evidence.
///
/// `axiom_residuals` maps each defining equation of the requested inverse
/// kind to its max-abs residual; every residual is checked against `eq_tol`
/// at construction. For the DCGI, `path_agreement` records the max-abs
/// difference between the compact and the block evaluation.
#[derive(Debug, Clone)]
pub struct DualGinvResult {
    pub inverse: DualMatrix,
    pub kind: InverseKind,
    pub axiom_residuals: BTreeMap<String, f64>,
    pub path: FormulaPath,
    pub path_agreement: Option<f64>,
}

/// Outcome of [`symmetric_identities`] on a symmetric dual-index-one matrix.
#[derive(Debug, Clone)]
pub struct SymmetricReport {
    pub dmpgi: DualMatrix,
    pub dggi: DualMatrix,
    pub dcgi: DualMatrix,
    /// Largest max-abs difference between any two of the three inverses.
    pub max_pairwise_gap: f64,
    /// Largest asymmetry among the three inverses.
    pub max_symmetry_residual: f64,
    /// Whether `rank([A B]) = rank(A)`, i.e. the dual part's range lies in
    /// the range of `A`.
    pub range_condition: bool,
    /// Max-abs difference between the common inverse and the MPDGI.
    pub mpdgi_gap: f64,
    /// Whether the MPDGI coincides too; implied by `range_condition`.
    pub mpdgi_coincides: bool,
}

// ── Small helpers ──────────────────────────────────────────────────────────

fn eye(n: usize) -> DMatrix<f64> {
    DMatrix::identity(n, n)
}

fn hcat(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    m.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
    m.view_mut((0, a.ncols()), (b.nrows(), b.ncols())).copy_from(b);
    m
}

/// `[B A; A 0]` for same-shape `A`, `B`.
fn stacked_block(b: &DMatrix<f64>, a: &DMatrix<f64>) -> DMatrix<f64> {
    let (m, n) = (a.nrows(), a.ncols());
    let mut blk = DMatrix::zeros(2 * m, 2 * n);
    blk.view_mut((0, 0), (m, n)).copy_from(b);
    blk.view_mut((0, n), (m, n)).copy_from(a);
    blk.view_mut((m, 0), (m, n)).copy_from(a);
    blk
}

fn rank_dm(m: DMatrix<f64>, tol: &Tolerance) -> usize {
    numerical_rank(&RealMatrix::from_dm(m), tol)
}

fn require_square(ah: &DualMatrix) -> Result<usize> {
    if !ah.is_square() {
        return Err(Error::NotSquare {
            rows: ah.rows(),
            cols: ah.cols(),
        });
    }
    Ok(ah.rows())
}

/// Scale for axiom residual bounds: defining equations multiply up to three
/// factors of `Ah` and `G`, so the bound grows with those products.
fn axiom_scale(ah: &DualMatrix, g: &DualMatrix) -> f64 {
    let a = ah.max_abs();
    let b = g.max_abs();
    let mut scale: f64 = 1.0;
    for v in [a, b, a * b, a * a * b, a * b * b] {
        scale = scale.max(v);
    }
    scale
}

fn build_result(
    ah: &DualMatrix,
    inverse: DualMatrix,
    kind: InverseKind,
    path: FormulaPath,
    path_agreement: Option<f64>,
    tol: &Tolerance,
) -> Result<DualGinvResult> {
    let axiom_residuals = verify_axioms(ah, &inverse, kind)?;
    let bound = tol.eq_bound(axiom_scale(ah, &inverse));
    for residual in axiom_residuals.values() {
        if *residual > bound {
            return Err(Error::InternalFormulaMismatch {
                check: "defining axioms of the computed inverse",
                residual: *residual,
                bound,
            });
        }
    }
    Ok(DualGinvResult {
        inverse,
        kind,
        axiom_residuals,
        path,
        path_agreement,
    })
}

// ── MPDGI and DMPGI ────────────────────────────────────────────────────────

/// Moore-Penrose dual generalized inverse `A+ - eps*A+ B A+`.
///
/// Total: defined for every dual matrix, but it satisfies the dual Penrose
/// equations only in special cases (see [`classify_special_forms`]). Use
/// [`verify_axioms`] to measure how far off it is.
pub fn mpdgi(ah: &DualMatrix, tol: &Tolerance) -> DualMatrix {
    let ap = pinv(ah.real(), tol);
    let dual = -(ap.dm() * ah.dual().dm() * ap.dm());
    DualMatrix::from_parts_unchecked(ap, RealMatrix::from_dm(dual))
}

/// Shared evaluation of the two DMPGI existence characterizations.
/// Returns (projector residual, rank gap, zero threshold).
fn dmpgi_conditions(ah: &DualMatrix, tol: &Tolerance) -> (f64, i64, f64) {
    let a = ah.real().dm();
    let b = ah.dual().dm();
    let ap = pinv(ah.real(), tol);
    let left = eye(a.nrows()) - a * ap.dm();
    let right = eye(a.ncols()) - ap.dm() * a;
    let proj = RealMatrix::from_dm(&left * b * &right).max_abs();
    let rank_a = numerical_rank(ah.real(), tol) as i64;
    let rank_blk = rank_dm(stacked_block(b, a), tol) as i64;
    let threshold = tol.eq_bound(ah.dual().max_abs());
    (proj, rank_blk - 2 * rank_a, threshold)
}

/// Whether the dual Moore-Penrose inverse of `Ah` exists.
///
/// Both characterizations, `(I - AA+) B (I - A+A) = 0` and
/// `rank([B A; A 0]) = 2 rank(A)`, are evaluated and must agree.
pub fn dmpgi_exists(ah: &DualMatrix, tol: &Tolerance) -> Result<bool> {
    let (proj, rank_gap, threshold) = dmpgi_conditions(ah, tol);
    let by_proj = proj <= threshold;
    let by_rank = rank_gap == 0;
    if by_proj != by_rank {
        return Err(Error::InconsistentCertificate {
            context: format!(
                "DMPGI existence: projector residual {proj:.3e} (threshold {threshold:.3e}) \
                 vs rank gap {rank_gap}"
            ),
        });
    }
    Ok(by_proj)
}

/// Dual Moore-Penrose inverse
/// `A+ - eps*(A+ B A+ - A+ A+^T B^T (I - AA+) - (I - A+A) B^T A+^T A+)`,
/// where `A+ A+^T = (A^T A)+` and `A+^T A+ = (A A^T)+`.
pub fn dmpgi(ah: &DualMatrix, tol: &Tolerance) -> Result<DualGinvResult> {
    let (proj, rank_gap, threshold) = dmpgi_conditions(ah, tol);
    let by_proj = proj <= threshold;
    if by_proj != (rank_gap == 0) {
        return Err(Error::InconsistentCertificate {
            context: format!(
                "DMPGI existence: projector residual {proj:.3e} (threshold {threshold:.3e}) \
                 vs rank gap {rank_gap}"
            ),
        });
    }
    if !by_proj {
        return Err(Error::DmpgiNotExist {
            projector_residual: proj,
            rank_gap,
        });
    }
    let a = ah.real().dm();
    let b = ah.dual().dm();
    let ap = pinv(ah.real(), tol);
    let apm = ap.dm();
    let left = eye(a.nrows()) - a * apm;
    let right = eye(a.ncols()) - apm * a;
    let correction =
        apm * b * apm - apm * apm.transpose() * b.transpose() * left
            - right * b.transpose() * apm.transpose() * apm;
    let inverse = DualMatrix::from_parts_unchecked(ap, RealMatrix::from_dm(-correction));
    build_result(ah, inverse, InverseKind::Dmpgi, FormulaPath::Compact, None, tol)
}

// ── Dual index one ─────────────────────────────────────────────────────────

/// Decides whether a square dual matrix has dual index one, i.e. whether
/// its DGGI and DCGI exist, returning the full certificate.
pub fn dual_index_is_one(ah: &DualMatrix, tol: &Tolerance) -> Result<ExistenceCertificate> {
    let n = require_square(ah)?;
    let a = ah.real().dm();
    let b = ah.dual().dm();
    let rank_a = numerical_rank(ah.real(), tol);
    let index_a_one = index_is_one(ah.real(), tol)?;
    let (proj_mp, rank_gap_block, threshold) = dmpgi_conditions(ah, tol);

    if !index_a_one {
        return Ok(ExistenceCertificate {
            dual_index_one: false,
            index_a_one: false,
            rank_a,
            residual_rank_block: rank_gap_block,
            residual_rank_aug: None,
            residual_proj_mp: proj_mp,
            residual_proj_gp: None,
            proj_zero_threshold: threshold,
        });
    }

    let ag = match group_inverse(ah.real(), tol) {
        Ok(g) => g,
        Err(Error::GroupInverseNotExist { sigma_min, cutoff }) => {
            return Err(Error::InconsistentCertificate {
                context: format!(
                    "rank test says index(A) = 1 but K is numerically singular \
                     (sigma_min {sigma_min:.3e}, cutoff {cutoff:.3e})"
                ),
            })
        }
        Err(e) => return Err(e),
    };
    let pg = eye(n) - a * ag.dm();
    let proj_gp = RealMatrix::from_dm(&pg * b * &pg).max_abs();
    let rank_aug = rank_dm(hcat(a, &(b * &pg)), tol);
    let rank_gap_aug = rank_aug as i64 - rank_a as i64;

    let votes = [
        rank_gap_aug == 0,
        rank_gap_block == 0,
        proj_mp <= threshold,
        proj_gp <= threshold,
    ];
    if votes.iter().any(|&v| v != votes[0]) {
        return Err(Error::InconsistentCertificate {
            context: format!(
                "dual index one: rank gap aug {rank_gap_aug}, rank gap block {rank_gap_block}, \
                 proj MP {proj_mp:.3e}, proj GP {proj_gp:.3e}, threshold {threshold:.3e}"
            ),
        });
    }

    Ok(ExistenceCertificate {
        dual_index_one: votes[0],
        index_a_one: true,
        rank_a,
        residual_rank_block: rank_gap_block,
        residual_rank_aug: Some(rank_gap_aug),
        residual_proj_mp: proj_mp,
        residual_proj_gp: Some(proj_gp),
        proj_zero_threshold: threshold,
    })
}

// ── DGGI ───────────────────────────────────────────────────────────────────

/// Dual group inverse `A# + eps*(-A# B A# + A#^2 B (I - AA#) + (I - AA#) B A#^2)`.
pub fn dggi(ah: &DualMatrix, tol: &Tolerance) -> Result<DualGinvResult> {
    require_square(ah)?;
    let certificate = dual_index_is_one(ah, tol)?;
    if !certificate.dual_index_one {
        return Err(Error::DggiNotExist { certificate });
    }
    let a = ah.real().dm();
    let b = ah.dual().dm();
    let ag = group_inverse(ah.real(), tol)?;
    let agm = ag.dm();
    // Compensated projector: ordinary evaluation of I - A A# carries
    // eps*|A|*|A#| noise that the surrounding products then amplify.
    let pg = residual_identity_compensated(a, agm);
    let ag2 = agm * agm;
    let r = -(agm * b * agm) + &ag2 * b * &pg + &pg * b * &ag2;
    let inverse = DualMatrix::from_parts_unchecked(ag, RealMatrix::from_dm(r));
    build_result(ah, inverse, InverseKind::Dggi, FormulaPath::Compact, None, tol)
}

/// Shortcut `A# - eps*A# B A#`; equals the DGGI exactly when
/// [`classify_special_forms`] sets `dggi_simple`.
pub fn dggi_simple_form(ah: &DualMatrix, tol: &Tolerance) -> Result<DualMatrix> {
    require_square(ah)?;
    let ag = group_inverse(ah.real(), tol)?;
    let dual = -(ag.dm() * ah.dual().dm() * ag.dm());
    Ok(DualMatrix::from_parts_unchecked(ag, RealMatrix::from_dm(dual)))
}

// ── DCGI ───────────────────────────────────────────────────────────────────

/// Compact route: closed formula in `A+`, `A#` and `A(c)`.
fn dcgi_compact_matrix(ah: &DualMatrix, tol: &Tolerance) -> Result<DualMatrix> {
    let a = ah.real().dm();
    let b = ah.dual().dm();
    let ap = pinv(ah.real(), tol);
    let ag = group_inverse(ah.real(), tol)?;
    let ac = crate::realginv::core_inverse(ah.real(), tol)?;
    let (apm, agm, acm) = (ap.dm(), ag.dm(), ac.dm());
    let bap = b * apm;
    // Two accuracy guards: the A# B A+ and A# B A(c) terms are grouped
    // around A+ - A(c), which vanishes whenever A+ = A(c) (in particular
    // for nonsingular A), and the projectors are evaluated compensated so
    // their eps*|A|*|inverse| rounding does not ride the large products.
    let p_mp = residual_identity_compensated(a, apm);
    let p_gp = residual_identity_compensated(a, agm);
    let r = -(acm * &bap) + agm * b * (apm - acm)
        + acm * bap.transpose() * p_mp
        + p_gp * b * agm * acm;
    Ok(DualMatrix::from_parts_unchecked(ac, RealMatrix::from_dm(r)))
}

/// Block route: Hartwig-basis formula. With `U^T B U` partitioned into
/// `B1..B4` conforming to `[SK SL; 0 0]`, the dual part is
///
/// ```text
/// U * | -K^-1 L B3 (SK)^-2 - (SK)^-1 B1 (SK)^-1    K^-1 S^-2 (B3 K^-1)^T | * U^T
///     |              B3 (SK)^-2                              0           |
/// ```
fn dcgi_block_matrix(ah: &DualMatrix, tol: &Tolerance) -> Result<DualMatrix> {
    let n = ah.rows();
    let h = hartwig_decompose(ah.real(), tol)?;
    let real = h.core_inverse_block(tol).map_err(|e| match e {
        Error::GroupInverseNotExist { sigma_min, cutoff } => {
            Error::CoreInverseNotExist { sigma_min, cutoff }
        }
        other => other,
    })?;
    let r = h.rank;
    if r == 0 {
        return Ok(DualMatrix::zeros(n, n).expect("n > 0"));
    }
    let u = h.u.dm();
    let bu = u.transpose() * ah.dual().dm() * u;
    let b1 = bu.view((0, 0), (r, r)).into_owned();
    let b3 = bu.view((r, 0), (n - r, r)).into_owned();

    let sk = h.sigma_k();
    let (sigma_min, _, cutoff) = h.k_singular_bounds(tol);
    let skinv = sk
        .try_inverse()
        .ok_or(Error::CoreInverseNotExist { sigma_min, cutoff })?;
    let skinv2 = &skinv * &skinv;
    let kinv = h
        .k
        .dm()
        .clone()
        .try_inverse()
        .ok_or(Error::CoreInverseNotExist { sigma_min, cutoff })?;
    let b3_kinv_t = (&b3 * &kinv).transpose();
    let mut sinv2_b3kt = b3_kinv_t.clone();
    for i in 0..r {
        sinv2_b3kt
            .row_mut(i)
            .scale_mut(1.0 / (h.sigma[i] * h.sigma[i]));
    }

    let tl = -(&kinv * h.l.dm() * &b3 * &skinv2) - &skinv * &b1 * &skinv;
    let tr = &kinv * &sinv2_b3kt;
    let bl = &b3 * &skinv2;

    let mut dual_blocks = DMatrix::zeros(n, n);
    dual_blocks.view_mut((0, 0), (r, r)).copy_from(&tl);
    dual_blocks.view_mut((0, r), (r, n - r)).copy_from(&tr);
    dual_blocks.view_mut((r, 0), (n - r, r)).copy_from(&bl);
    let dual = u * dual_blocks * u.transpose();

    Ok(DualMatrix::from_parts_unchecked(real, RealMatrix::from_dm(dual)))
}

/// Dual core inverse of a square dual-index-one matrix.
///
/// Computed along both the compact and the block route; the two evaluations
/// must agree within `eq_tol` ([`Error::InternalFormulaMismatch`] otherwise)
/// and the compact result is returned with the observed agreement residual.
///
/// # Example
///
/// ```
/// use dualinv::dualnum::{DualMatrix, RealMatrix};
/// use dualinv::dualginv::dcgi;
/// use dualinv::realginv::Tolerance;
///
/// let a = RealMatrix::from_rows(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
/// let b = RealMatrix::from_rows(2, 2, &[1.0, 1.0, 1.0, 0.0]).unwrap();
/// let ah = DualMatrix::new(a, b).unwrap();
/// let g = dcgi(&ah, &Tolerance::default()).unwrap();
/// assert!((g.inverse.dual().get(0, 0) - (-1.0)).abs() < 1e-12);
/// ```
pub fn dcgi(ah: &DualMatrix, tol: &Tolerance) -> Result<DualGinvResult> {
    require_square(ah)?;
    let certificate = dual_index_is_one(ah, tol)?;
    if !certificate.dual_index_one {
        return Err(Error::DcgiNotExist { certificate });
    }
    let compact = dcgi_compact_matrix(ah, tol)?;
    let block = dcgi_block_matrix(ah, tol)?;
    let residual = compact.max_abs_diff(&block);
    // Each route rounds like eps times its largest intermediate product, so
    // the agreement bound uses the same scale policy as the axiom checks;
    // a genuine formula mismatch is result-sized and clears it by orders of
    // magnitude.
    let scale = axiom_scale(ah, &compact).max(axiom_scale(ah, &block));
    let bound = tol.eq_bound(scale);
    if residual > bound {
        return Err(Error::InternalFormulaMismatch {
            check: "dual core inverse: compact formula vs block formula",
            residual,
            bound,
        });
    }
    build_result(
        ah,
        compact,
        InverseKind::Dcgi,
        FormulaPath::Compact,
        Some(residual),
        tol,
    )
}

/// Dual core inverse computed through the block route alone. Useful for
/// comparing the two evaluation paths from the outside; [`dcgi`] already
/// cross-checks them internally.
pub fn dcgi_block(ah: &DualMatrix, tol: &Tolerance) -> Result<DualGinvResult> {
    require_square(ah)?;
    let certificate = dual_index_is_one(ah, tol)?;
    if !certificate.dual_index_one {
        return Err(Error::DcgiNotExist { certificate });
    }
    let block = dcgi_block_matrix(ah, tol)?;
    build_result(ah, block, InverseKind::Dcgi, FormulaPath::Block, None, tol)
}

/// Shortcut `A(c) - eps*A(c) B A(c)`; equals the DCGI exactly when
/// [`classify_special_forms`] sets `dcgi_simple`.
pub fn dcgi_simple_form(ah: &DualMatrix, tol: &Tolerance) -> Result<DualMatrix> {
    require_square(ah)?;
    let ac = crate::realginv::core_inverse(ah.real(), tol)?;
    let dual = -(ac.dm() * ah.dual().dm() * ac.dm());
    Ok(DualMatrix::from_parts_unchecked(ac, RealMatrix::from_dm(dual)))
}

// ── Classification and the symmetric case ──────────────────────────────────

/// Decides the three special-form flags for a square dual matrix. Each flag
/// is determined by its own projector condition; see [`SpecialForms`].
pub fn classify_special_forms(ah: &DualMatrix, tol: &Tolerance) -> Result<SpecialForms> {
    let n = require_square(ah)?;
    let a = ah.real().dm();
    let b = ah.dual().dm();
    let ap = pinv(ah.real(), tol);
    let left = eye(n) - a * ap.dm();
    let right = eye(n) - ap.dm() * a;
    let threshold = tol.eq_bound(ah.dual().max_abs());
    let left_zero = RealMatrix::from_dm(&left * b).max_abs() <= threshold;
    let right_zero = RealMatrix::from_dm(b * &right).max_abs() <= threshold;

    let index_one = index_is_one(ah.real(), tol)?;
    let dggi_simple = if index_one {
        let ag = group_inverse(ah.real(), tol)?;
        let pg = eye(n) - a * ag.dm();
        RealMatrix::from_dm(b * &pg).max_abs() <= threshold
            && RealMatrix::from_dm(&pg * b).max_abs() <= threshold
    } else {
        false
    };

    Ok(SpecialForms {
        dmpgi_eq_mpdgi: left_zero && right_zero,
        dcgi_simple: index_one && left_zero,
        dggi_simple,
    })
}

/// For a symmetric dual-index-one matrix the DGGI, DMPGI and DCGI coincide
/// and are symmetric; this computes all three, enforces the identities and
/// additionally reports whether the MPDGI coincides as well (it does exactly
/// when `rank([A B]) = rank(A)`).
///
/// Errors with [`Error::NotSymmetric`] when `Ah` is not symmetric in both
/// parts, and with [`Error::DcgiNotExist`] when the dual index exceeds one.
pub fn symmetric_identities(ah: &DualMatrix, tol: &Tolerance) -> Result<SymmetricReport> {
    require_square(ah)?;
    let residual = ah.symmetry_residual();
    let bound = tol.eq_bound(ah.max_abs());
    if residual > bound {
        return Err(Error::NotSymmetric { residual, bound });
    }

    let dcgi_res = dcgi(ah, tol)?;
    let dggi_res = dggi(ah, tol)?;
    let dmpgi_res = dmpgi(ah, tol)?;
    let (c, g, p) = (&dcgi_res.inverse, &dggi_res.inverse, &dmpgi_res.inverse);

    let max_pairwise_gap = c
        .max_abs_diff(g)
        .max(c.max_abs_diff(p))
        .max(g.max_abs_diff(p));
    let max_symmetry_residual = c
        .symmetry_residual()
        .max(g.symmetry_residual())
        .max(p.symmetry_residual());
    let scale = c.max_abs().max(g.max_abs()).max(p.max_abs());
    let id_bound = tol.eq_bound(scale);
    if max_pairwise_gap > id_bound || max_symmetry_residual > id_bound {
        return Err(Error::InternalFormulaMismatch {
            check: "symmetric case: DGGI = DMPGI = DCGI and symmetry of each",
            residual: max_pairwise_gap.max(max_symmetry_residual),
            bound: id_bound,
        });
    }

    let rank_a = numerical_rank(ah.real(), tol);
    let rank_ab = rank_dm(hcat(ah.real().dm(), ah.dual().dm()), tol);
    let range_condition = rank_ab == rank_a;
    let mp = mpdgi(ah, tol);
    let mpdgi_gap = c.max_abs_diff(&mp);
    let mpdgi_coincides = mpdgi_gap <= id_bound;
    if range_condition && !mpdgi_coincides {
        return Err(Error::InternalFormulaMismatch {
            check: "symmetric case: rank([A B]) = rank(A) must force DCGI = MPDGI",
            residual: mpdgi_gap,
            bound: id_bound,
        });
    }

    Ok(SymmetricReport {
        dmpgi: dmpgi_res.inverse,
        dggi: dggi_res.inverse,
        dcgi: dcgi_res.inverse,
        max_pairwise_gap,
        max_symmetry_residual,
        range_condition,
        mpdgi_gap,
        mpdgi_coincides,
    })
}

// ── Axiom verification ─────────────────────────────────────────────────────

/// Max-abs residuals of the defining equations of the given inverse kind,
/// evaluated for an arbitrary candidate `g`. Pure measurement: no existence
/// checks, no thresholds.
///
/// Axiom labels: `1` is `Ah G Ah = Ah`, `2` is `G Ah G = G`, `3` is
/// `(Ah G)^T = Ah G`, `4` is `(G Ah)^T = G Ah`, `5` is `Ah G = G Ah` and
/// `2'` is `Ah G^2 = G`. MPDGI and DMPGI candidates are measured against
/// the four Penrose equations (1-4), DGGI against (1, 2, 5) and DCGI
/// against (1, 2', 3).
pub fn verify_axioms(
    ah: &DualMatrix,
    g: &DualMatrix,
    kind: InverseKind,
) -> Result<BTreeMap<String, f64>> {
    if g.rows() != ah.cols() || g.cols() != ah.rows() {
        return Err(Error::DimensionMismatch {
            op: "verify_axioms",
            lhs: (ah.rows(), ah.cols()),
            rhs: (g.rows(), g.cols()),
        });
    }
    let ag = ah.matmul(g)?;
    let ga = g.matmul(ah)?;
    let mut out = BTreeMap::new();
    let aga = ag.matmul(ah)?;
    out.insert("1".to_string(), aga.max_abs_diff(ah));
    match kind {
        InverseKind::Mpdgi | InverseKind::Dmpgi => {
            let gag = ga.matmul(g)?;
            out.insert("2".to_string(), gag.max_abs_diff(g));
            out.insert("3".to_string(), ag.symmetry_residual());
            out.insert("4".to_string(), ga.symmetry_residual());
        }
        InverseKind::Dggi => {
            let gag = ga.matmul(g)?;
            out.insert("2".to_string(), gag.max_abs_diff(g));
            out.insert("5".to_string(), ag.max_abs_diff(&ga));
        }
        InverseKind::Dcgi => {
            let ag2 = ag.matmul(g)?;
            out.insert("2'".to_string(), ag2.max_abs_diff(g));
            out.insert("3".to_string(), ag.symmetry_residual());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rm(rows: usize, cols: usize, e: &[f64]) -> RealMatrix {
        RealMatrix::from_rows(rows, cols, e).unwrap()
    }

    fn dm(rows: usize, cols: usize, real: &[f64], dual: &[f64]) -> DualMatrix {
        DualMatrix::new(rm(rows, cols, real), rm(rows, cols, dual)).unwrap()
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    // A + eps*B with A = [[1,0],[0,0]], B = [[0,1],[0,0]]: the three dual
    // inverses exist and are all different.
    fn shifted_projector() -> DualMatrix {
        dm(2, 2, &[1., 0., 0., 0.], &[0., 1., 0., 0.])
    }

    #[test]
    fn worked_example_all_inverses_distinct() {
        let ah = shifted_projector();
        let t = tol();

        let mp = mpdgi(&ah, &t);
        assert_eq!(mp.dual().max_abs(), 0.0);

        let dmp = dmpgi(&ah, &t).unwrap();
        assert!(dmp.inverse.real().max_abs_diff(&rm(2, 2, &[1., 0., 0., 0.])) < 1e-14);
        assert!(dmp.inverse.dual().max_abs_diff(&rm(2, 2, &[0., 0., 1., 0.])) < 1e-14);

        let dg = dggi(&ah, &t).unwrap();
        assert!(dg.inverse.dual().max_abs_diff(&rm(2, 2, &[0., 1., 0., 0.])) < 1e-14);

        let dc = dcgi(&ah, &t).unwrap();
        assert!(dc.inverse.real().max_abs_diff(&rm(2, 2, &[1., 0., 0., 0.])) < 1e-14);
        assert_eq!(dc.inverse.dual().max_abs(), 0.0);
        assert!(dc.path_agreement.unwrap() < 1e-14);

        // MPDGI differs from DMPGI here, and verify_axioms quantifies it
        let residuals = verify_axioms(&ah, &mp, InverseKind::Dmpgi).unwrap();
        let worst = residuals.values().cloned().fold(0.0_f64, f64::max);
        assert!(worst > 0.9, "MPDGI should fail a Penrose equation, worst {worst}");
    }

    #[test]
    fn dense_regression_dmpgi_vs_dcgi() {
        // A = [[4,2],[2,1]], B = [[10,10],[9,7]]: rank-one symmetric real
        // part with a full dual part; frozen digits for all three inverses.
        let ah = dm(2, 2, &[4., 2., 2., 1.], &[10., 10., 9., 7.]);
        let t = tol();

        let dmp = dmpgi(&ah, &t).unwrap().inverse;
        assert!(dmp.real().max_abs_diff(&rm(2, 2, &[0.16, 0.08, 0.08, 0.04])) < 1e-12);
        assert!(dmp.dual().max_abs_diff(&rm(2, 2, &[-0.688, -0.184, -0.144, 0.008])) < 1e-12);

        let dc = dcgi(&ah, &t).unwrap().inverse;
        assert!(dc.real().max_abs_diff(&rm(2, 2, &[0.16, 0.08, 0.08, 0.04])) < 1e-12);
        assert!(dc.dual().max_abs_diff(&rm(2, 2, &[-0.672, -0.176, -0.176, -0.008])) < 1e-12);

        let dg = dggi(&ah, &t).unwrap().inverse;
        assert!(dg.dual().max_abs_diff(&rm(2, 2, &[-0.688, -0.144, -0.184, 0.008])) < 1e-12);
    }

    #[test]
    fn nonexistence_diag_family() {
        // A = diag(1,1,0), B = e3 e3^T: every characterization fails.
        let ah = dm(
            3,
            3,
            &[1., 0., 0., 0., 1., 0., 0., 0., 0.],
            &[0., 0., 0., 0., 0., 0., 0., 0., 1.],
        );
        let t = tol();
        let cert = dual_index_is_one(&ah, &t).unwrap();
        assert!(cert.index_a_one);
        assert!(!cert.dual_index_one);
        assert_eq!(cert.residual_rank_block, 1);
        assert_eq!(cert.residual_rank_aug, Some(1));
        assert!((cert.residual_proj_mp - 1.0).abs() < 1e-14);
        assert!((cert.residual_proj_gp.unwrap() - 1.0).abs() < 1e-14);

        assert!(matches!(dcgi(&ah, &t), Err(Error::DcgiNotExist { .. })));
        assert!(matches!(dggi(&ah, &t), Err(Error::DggiNotExist { .. })));
        assert!(matches!(dmpgi(&ah, &t), Err(Error::DmpgiNotExist { .. })));
        assert!(!dmpgi_exists(&ah, &t).unwrap());
    }

    #[test]
    fn dual_index_rejects_higher_real_index() {
        // nilpotent real part: index(A) = 2, so dual index cannot be one
        let ah = dm(2, 2, &[0., 1., 0., 0.], &[0., 0., 0., 0.]);
        let cert = dual_index_is_one(&ah, &tol()).unwrap();
        assert!(!cert.index_a_one);
        assert!(!cert.dual_index_one);
        assert_eq!(cert.residual_rank_aug, None);
        // but the DMPGI exists: B = 0 trivially satisfies the projector test
        assert!(dmpgi_exists(&ah, &tol()).unwrap());
        assert!(matches!(dggi(&ah, &tol()), Err(Error::DggiNotExist { .. })));
    }

    #[test]
    fn certificate_display_is_informative() {
        let ah = dm(2, 2, &[0., 1., 0., 0.], &[0., 0., 0., 0.]);
        let cert = dual_index_is_one(&ah, &tol()).unwrap();
        let text = cert.to_string();
        assert!(text.contains("dual index one: false"));
        assert!(text.contains("n/a"));
    }

    #[test]
    fn special_forms_on_shifted_projector() {
        // B = [[0,1],[0,0]]: (I-AA+)B = 0 holds, B(I-A+A) = 0 fails
        let flags = classify_special_forms(&shifted_projector(), &tol()).unwrap();
        assert!(flags.dcgi_simple);
        assert!(!flags.dmpgi_eq_mpdgi);
        assert!(!flags.dggi_simple);

        // mirrored dual part: (I-AA+)B != 0, so dcgi_simple is unset
        let mirrored = dm(2, 2, &[1., 0., 0., 0.], &[0., 0., 1., 0.]);
        let flags = classify_special_forms(&mirrored, &tol()).unwrap();
        assert!(!flags.dcgi_simple);
        assert!(!flags.dmpgi_eq_mpdgi);
        assert!(!flags.dggi_simple);

        // B = A W A saturates every flag
        let a = rm(2, 2, &[1., 1., 0., 0.]);
        let w = rm(2, 2, &[2., -1., 3., 0.5]);
        let b = a.matmul(&w).unwrap().matmul(&a).unwrap();
        let ah = DualMatrix::new(a, b).unwrap();
        let flags = classify_special_forms(&ah, &tol()).unwrap();
        assert!(flags.dggi_simple && flags.dmpgi_eq_mpdgi && flags.dcgi_simple);
        // and the simple forms then match the general formulas
        let t = tol();
        assert!(dggi_simple_form(&ah, &t)
            .unwrap()
            .approx_eq(&dggi(&ah, &t).unwrap().inverse, 1e-12));
        assert!(dcgi_simple_form(&ah, &t)
            .unwrap()
            .approx_eq(&dcgi(&ah, &t).unwrap().inverse, 1e-12));
        assert!(mpdgi(&ah, &t).approx_eq(&dmpgi(&ah, &t).unwrap().inverse, 1e-12));
    }

    #[test]
    fn symmetric_identities_diagonal_example() {
        // Ah = diag(2,0) + eps*diag(1,0): all inverses equal
        // diag(0.5,0) - eps*diag(0.25,0)
        let ah = dm(2, 2, &[2., 0., 0., 0.], &[1., 0., 0., 0.]);
        let rep = symmetric_identities(&ah, &tol()).unwrap();
        assert!(rep.dcgi.real().max_abs_diff(&rm(2, 2, &[0.5, 0., 0., 0.])) < 1e-14);
        assert!(rep.dcgi.dual().max_abs_diff(&rm(2, 2, &[-0.25, 0., 0., 0.])) < 1e-14);
        assert!(rep.max_pairwise_gap < 1e-14);
        assert!(rep.range_condition);
        assert!(rep.mpdgi_coincides);
    }

    #[test]
    fn symmetric_identities_rejects_asymmetric_dual_part() {
        // symmetric real part, asymmetric dual part: not a symmetric dual matrix
        let ah = dm(2, 2, &[4., 2., 2., 1.], &[10., 10., 9., 7.]);
        assert!(matches!(
            symmetric_identities(&ah, &tol()),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn verify_axioms_shape_check() {
        let ah = shifted_projector();
        let wrong = DualMatrix::zeros(3, 2).unwrap();
        assert!(matches!(
            verify_axioms(&ah, &wrong, InverseKind::Dcgi),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn kind_roundtrips_through_strings() {
        for kind in [
            InverseKind::Mpdgi,
            InverseKind::Dmpgi,
            InverseKind::Dggi,
            InverseKind::Dcgi,
        ] {
            let parsed: InverseKind = kind.as_str().parse().unwrap();
            assert_eq!(parsed, kind);
        }
        assert!("core".parse::<InverseKind>().is_err());
    }
}
