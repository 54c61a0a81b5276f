//! Seeded random generators shared by the integration test suites.
//!
//! All constructions are deterministic given the `ChaCha8Rng` seed, so
//! every suite is reproducible. Matrices with a prescribed index are
//! built in a rotated basis: an orthogonal `U` conjugating a block form
//! whose index is known by construction.

#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dualinv::realginv::group_inverse;
use dualinv::{DualMatrix, RealMatrix, Tolerance};

pub fn tol() -> Tolerance {
    Tolerance::default()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dual(real: RealMatrix, dual: RealMatrix) -> DualMatrix {
    DualMatrix::new(real, dual).unwrap()
}

fn to_real(m: &DMatrix<f64>) -> RealMatrix {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut entries = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            entries.push(m[(i, j)]);
        }
    }
    RealMatrix::from_rows(rows, cols, &entries).unwrap()
}

/// Uniform entries in `[-scale, scale]`.
pub fn random_real(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> RealMatrix {
    to_real(&DMatrix::from_fn(rows, cols, |_, _| {
        rng.random_range(-scale..scale)
    }))
}

/// Symmetric matrix with entries of order `scale`.
pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> RealMatrix {
    let s = DMatrix::from_fn(n, n, |_, _| rng.random_range(-scale..scale));
    to_real(&((&s + s.transpose()) * 0.5))
}

fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    g.qr().q()
}

/// Rank-`r` square matrix of index one: `U [M N; 0 0] U^T` with an
/// invertible `M` whose singular values lie in `[0.5, 2]`.
pub fn random_index_one(rng: &mut ChaCha8Rng, n: usize, r: usize) -> RealMatrix {
    assert!(r <= n);
    if r == 0 {
        return RealMatrix::zeros(n, n).unwrap();
    }
    let u = random_orthogonal(rng, n);
    let q1 = random_orthogonal(rng, r);
    let q2 = random_orthogonal(rng, r);
    let d = DMatrix::from_fn(r, r, |i, j| {
        if i == j {
            rng.random_range(0.5..2.0)
        } else {
            0.0
        }
    });
    let m = &q1 * d * q2.transpose();
    let mut block = DMatrix::zeros(n, n);
    block.view_mut((0, 0), (r, r)).copy_from(&m);
    if r < n {
        let tail = DMatrix::from_fn(r, n - r, |_, _| rng.random_range(-1.0..1.0));
        block.view_mut((0, r), (r, n - r)).copy_from(&tail);
    }
    to_real(&(&u * block * u.transpose()))
}

/// Square matrix of index two: a 2x2 nilpotent block conjugated together
/// with an invertible diagonal tail.
pub fn random_index_two(rng: &mut ChaCha8Rng, n: usize) -> RealMatrix {
    assert!(n >= 2);
    let u = random_orthogonal(rng, n);
    let mut j = DMatrix::zeros(n, n);
    j[(0, 1)] = 1.0;
    for i in 2..n {
        if rng.random_bool(0.7) {
            j[(i, i)] = rng.random_range(0.5..2.0);
        }
    }
    to_real(&(&u * j * u.transpose()))
}

/// Symmetric rank-`r` matrix (index one automatically), eigenvalues of
/// magnitude in `[0.5, 2]` with random signs.
pub fn random_symmetric_index_one(rng: &mut ChaCha8Rng, n: usize, r: usize) -> RealMatrix {
    assert!(r <= n);
    let q = random_orthogonal(rng, n);
    let d = DMatrix::from_fn(n, n, |i, j| {
        if i == j && i < r {
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            sign * rng.random_range(0.5..2.0)
        } else {
            0.0
        }
    });
    to_real(&(&q * d * q.transpose()))
}

/// Dual part making `(A, B)` dual index one: with `P = A A^#`,
/// `B = S - (I-P) S (I-P)` kills the obstruction exactly. `A` must have
/// index one. Passing a symmetric `seed_part` keeps `B` symmetric when
/// `A` is symmetric.
pub fn force_dual_index_one(a: &RealMatrix, seed_part: &RealMatrix, tol: &Tolerance) -> RealMatrix {
    let g = group_inverse(a, tol).expect("index-one input");
    let p = a.matmul(&g).unwrap();
    let q = RealMatrix::identity(a.rows()).unwrap().sub(&p).unwrap();
    let qsq = q.matmul(seed_part).unwrap().matmul(&q).unwrap();
    seed_part.sub(&qsq).unwrap()
}

/// Dual matrix with a prescribed dual index one, built from a random
/// index-one real part of rank `r`.
pub fn random_dual_index_one(rng: &mut ChaCha8Rng, n: usize, r: usize) -> DualMatrix {
    let a = random_index_one(rng, n, r);
    let s = random_real(rng, n, n, 1.0);
    let b = force_dual_index_one(&a, &s, &tol());
    dual(a, b)
}

/// Symmetric dual matrix with dual index one.
pub fn random_symmetric_dual_index_one(rng: &mut ChaCha8Rng, n: usize, r: usize) -> DualMatrix {
    let a = random_symmetric_index_one(rng, n, r);
    let s = random_symmetric(rng, n, 1.0);
    let b = force_dual_index_one(&a, &s, &tol());
    dual(a, b)
}

/// Rank-deficient rectangular matrix: a product of thin factors.
pub fn random_low_rank(rng: &mut ChaCha8Rng, rows: usize, cols: usize, r: usize) -> RealMatrix {
    let left = random_real(rng, rows, r, 1.0);
    let right = random_real(rng, r, cols, 1.0);
    left.matmul(&right).unwrap()
}

/// Dual matrix assembled block by block in a rotated basis:
/// `A = U [SK SL; 0 0] U^T` with nonsingular `K`, and
/// `B = U [B1 B2; B3 B4] U^T` with `B4 = B3 K^-1 L`, which makes the dual
/// index one by construction. With `perturb` the `B4` block is shifted by
/// a unit perturbation, which breaks it whenever `r < n`.
pub fn structured_dual_index_one(
    rng: &mut ChaCha8Rng,
    n: usize,
    r: usize,
    perturb: bool,
) -> DualMatrix {
    assert!(r >= 1 && r <= n);
    let u = random_orthogonal(rng, n);
    // First r rows of an orthogonal matrix give K K^T + L L^T = I_r;
    // resample until K is comfortably nonsingular.
    let (k, l) = loop {
        let q = random_orthogonal(rng, n);
        let k = q.view((0, 0), (r, r)).clone_owned();
        let l = q.view((0, r), (r, n - r)).clone_owned();
        let smin = k
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .fold(f64::INFINITY, |acc, &s| acc.min(s));
        if r == n || smin > 0.2 {
            break (k, l);
        }
    };
    let sigma = DMatrix::from_fn(r, r, |i, j| {
        if i == j {
            rng.random_range(0.5..2.0)
        } else {
            0.0
        }
    });
    let mut a_block = DMatrix::zeros(n, n);
    a_block.view_mut((0, 0), (r, r)).copy_from(&(&sigma * &k));
    if r < n {
        a_block.view_mut((0, r), (r, n - r)).copy_from(&(&sigma * &l));
    }

    let b1 = DMatrix::from_fn(r, r, |_, _| rng.random_range(-1.0..1.0));
    let b2 = DMatrix::from_fn(r, n - r, |_, _| rng.random_range(-1.0..1.0));
    let b3 = DMatrix::from_fn(n - r, r, |_, _| rng.random_range(-1.0..1.0));
    let k_inv = k.clone().try_inverse().expect("K built nonsingular");
    let mut b4 = &b3 * &k_inv * &l;
    if perturb && r < n {
        b4[(0, 0)] += 1.0;
    }
    let mut b_block = DMatrix::zeros(n, n);
    b_block.view_mut((0, 0), (r, r)).copy_from(&b1);
    if r < n {
        b_block.view_mut((0, r), (r, n - r)).copy_from(&b2);
        b_block.view_mut((r, 0), (n - r, r)).copy_from(&b3);
        b_block.view_mut((r, r), (n - r, n - r)).copy_from(&b4);
    }

    let a = to_real(&(&u * a_block * u.transpose()));
    let b = to_real(&(&u * b_block * u.transpose()));
    dual(a, b)
}
