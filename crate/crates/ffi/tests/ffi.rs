//! Exercises the C ABI through the exported `extern "C"` functions,
//! including handle lifecycle, known inverse values, nonexistence status
//! codes and argument validation.

use std::ffi::CStr;
use std::ptr;

use dualinv_ffi::{
    dgi_dual_index_is_one, dgi_inverse, dgi_matrix_cols, dgi_matrix_copy, dgi_matrix_free,
    dgi_matrix_new, dgi_matrix_rows, dgi_solve, dgi_status_message, DgiKind, DgiMatrix, DgiStatus,
};

const KIND_MPDGI: i32 = DgiKind::Mpdgi as i32;
const KIND_DMPGI: i32 = DgiKind::Dmpgi as i32;
const KIND_DGGI: i32 = DgiKind::Dggi as i32;
const KIND_DCGI: i32 = DgiKind::Dcgi as i32;

unsafe fn new_matrix(rows: usize, cols: usize, real: &[f64], dual: Option<&[f64]>) -> *mut DgiMatrix {
    let mut out: *mut DgiMatrix = ptr::null_mut();
    let status = dgi_matrix_new(
        rows,
        cols,
        real.as_ptr(),
        dual.map_or(ptr::null(), |d| d.as_ptr()),
        &mut out,
    );
    assert_eq!(status, DgiStatus::Ok);
    assert!(!out.is_null());
    out
}

unsafe fn read_matrix(m: *const DgiMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = dgi_matrix_rows(m) * dgi_matrix_cols(m);
    let mut real = vec![0.0; n];
    let mut dual = vec![0.0; n];
    let status = dgi_matrix_copy(m, real.as_mut_ptr(), dual.as_mut_ptr());
    assert_eq!(status, DgiStatus::Ok);
    (real, dual)
}

fn assert_close(got: &[f64], want: &[f64], tol: f64) {
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= tol, "got {got:?}, want {want:?}");
    }
}

#[test]
fn matrix_lifecycle_and_copy() {
    unsafe {
        let real = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let dual = [0.5, 0.0, -0.5, 1.0, 0.0, -1.0];
        let m = new_matrix(2, 3, &real, Some(&dual));
        assert_eq!(dgi_matrix_rows(m), 2);
        assert_eq!(dgi_matrix_cols(m), 3);
        let (r, d) = read_matrix(m);
        assert_close(&r, &real, 0.0);
        assert_close(&d, &dual, 0.0);
        dgi_matrix_free(m);

        // Null dual pointer means a zero dual part.
        let m = new_matrix(2, 3, &real, None);
        let (_, d) = read_matrix(m);
        assert_close(&d, &[0.0; 6], 0.0);
        dgi_matrix_free(m);

        // Freeing null is a no-op.
        dgi_matrix_free(ptr::null_mut());
    }
}

#[test]
fn dcgi_matches_known_values() {
    unsafe {
        let a = new_matrix(2, 2, &[1., 0., 0., 0.], Some(&[1., 1., 1., 0.]));
        let mut inv: *mut DgiMatrix = ptr::null_mut();
        let status = dgi_inverse(a, KIND_DCGI, -1.0, -1.0, &mut inv);
        assert_eq!(status, DgiStatus::Ok);
        let (r, d) = read_matrix(inv);
        assert_close(&r, &[1., 0., 0., 0.], 1e-12);
        assert_close(&d, &[-1., 1., 1., 0.], 1e-12);
        dgi_matrix_free(inv);
        dgi_matrix_free(a);
    }
}

#[test]
fn nonexistence_maps_to_not_exist_status() {
    unsafe {
        // Real part diag(1,1,0) with a dual perturbation in the bottom-right
        // corner: no dual Moore-Penrose, group or core inverse exists.
        let real = [1., 0., 0., 0., 1., 0., 0., 0., 0.];
        let dual = [0., 0., 0., 0., 0., 0., 0., 0., 1.];
        let a = new_matrix(3, 3, &real, Some(&dual));
        for kind in [KIND_DMPGI, KIND_DGGI, KIND_DCGI] {
            let mut inv: *mut DgiMatrix = ptr::null_mut();
            let status = dgi_inverse(a, kind, -1.0, -1.0, &mut inv);
            assert_eq!(status, DgiStatus::NotExist);
            assert!(inv.is_null());
        }
        // MPDGI is total: it exists even where the others do not.
        let mut inv: *mut DgiMatrix = ptr::null_mut();
        let status = dgi_inverse(a, KIND_MPDGI, -1.0, -1.0, &mut inv);
        assert_eq!(status, DgiStatus::Ok);
        dgi_matrix_free(inv);
        dgi_matrix_free(a);
    }
}

#[test]
fn argument_validation() {
    unsafe {
        let real = [1.0, 0.0, 0.0, 1.0];
        let mut out: *mut DgiMatrix = ptr::null_mut();

        assert_eq!(
            dgi_matrix_new(2, 2, ptr::null(), ptr::null(), &mut out),
            DgiStatus::NullPointer
        );
        assert_eq!(
            dgi_matrix_new(2, 2, real.as_ptr(), ptr::null(), ptr::null_mut()),
            DgiStatus::NullPointer
        );
        assert_eq!(
            dgi_matrix_new(0, 2, real.as_ptr(), ptr::null(), &mut out),
            DgiStatus::InvalidArgument
        );
        let bad = [1.0, f64::NAN, 0.0, 1.0];
        assert_eq!(
            dgi_matrix_new(2, 2, bad.as_ptr(), ptr::null(), &mut out),
            DgiStatus::InvalidArgument
        );

        let a = new_matrix(2, 2, &real, None);
        let mut inv: *mut DgiMatrix = ptr::null_mut();
        assert_eq!(dgi_inverse(a, 9, -1.0, -1.0, &mut inv), DgiStatus::InvalidArgument);
        assert_eq!(
            dgi_inverse(ptr::null(), KIND_DCGI, -1.0, -1.0, &mut inv),
            DgiStatus::NullPointer
        );
        assert_eq!(
            dgi_inverse(a, KIND_DCGI, f64::NAN, -1.0, &mut inv),
            DgiStatus::InvalidArgument
        );

        // Rectangular input: group and core inverses need a square matrix.
        let rect = new_matrix(2, 3, &[1., 0., 0., 0., 1., 0.], None);
        assert_eq!(
            dgi_inverse(rect, KIND_DCGI, -1.0, -1.0, &mut inv),
            DgiStatus::ShapeMismatch
        );
        dgi_matrix_free(rect);
        dgi_matrix_free(a);
    }
}

#[test]
fn dual_index_probe() {
    unsafe {
        let a = new_matrix(2, 2, &[1., 0., 0., 0.], Some(&[1., 1., 1., 0.]));
        let mut flag: i32 = -1;
        assert_eq!(dgi_dual_index_is_one(a, -1.0, -1.0, &mut flag), DgiStatus::Ok);
        assert_eq!(flag, 1);
        dgi_matrix_free(a);

        let real = [1., 0., 0., 0., 1., 0., 0., 0., 0.];
        let dual = [0., 0., 0., 0., 0., 0., 0., 0., 1.];
        let a = new_matrix(3, 3, &real, Some(&dual));
        let mut flag: i32 = -1;
        assert_eq!(dgi_dual_index_is_one(a, -1.0, -1.0, &mut flag), DgiStatus::Ok);
        assert_eq!(flag, 0);
        dgi_matrix_free(a);
    }
}

#[test]
fn solve_known_system() {
    unsafe {
        let a = new_matrix(2, 2, &[1., 0., 0., 0.], Some(&[1., 1., 1., 0.]));
        let b = new_matrix(2, 1, &[1., 0.], Some(&[1., 1.]));
        let mut particular: *mut DgiMatrix = ptr::null_mut();
        let mut projector: *mut DgiMatrix = ptr::null_mut();
        let mut consistent: i32 = -1;
        let mut error_norm = f64::NAN;
        let status = dgi_solve(
            a,
            b,
            KIND_DCGI,
            -1.0,
            -1.0,
            &mut particular,
            &mut projector,
            &mut consistent,
            &mut error_norm,
        );
        assert_eq!(status, DgiStatus::Ok);
        assert_eq!(consistent, 1);
        assert!(error_norm < 1e-12);

        let (pr, pd) = read_matrix(particular);
        assert_close(&pr, &[1., 0.], 1e-12);
        assert_close(&pd, &[0., 1.], 1e-12);
        let (qr, qd) = read_matrix(projector);
        assert_close(&qr, &[0., 0., 0., 1.], 1e-12);
        assert_close(&qd, &[0., -1., -1., 0.], 1e-12);

        dgi_matrix_free(particular);
        dgi_matrix_free(projector);

        // A two-column right-hand side is not a vector.
        let wide = new_matrix(2, 2, &[1., 0., 0., 1.], None);
        let status = dgi_solve(
            a,
            wide,
            KIND_DCGI,
            -1.0,
            -1.0,
            &mut particular,
            ptr::null_mut(),
            ptr::null_mut(),
            ptr::null_mut(),
        );
        assert_eq!(status, DgiStatus::ShapeMismatch);
        dgi_matrix_free(wide);
        dgi_matrix_free(b);
        dgi_matrix_free(a);
    }
}

#[test]
fn status_messages_are_static_c_strings() {
    let statuses = [
        DgiStatus::Ok,
        DgiStatus::NullPointer,
        DgiStatus::InvalidArgument,
        DgiStatus::ShapeMismatch,
        DgiStatus::NotExist,
        DgiStatus::NotSymmetric,
        DgiStatus::Inconsistent,
        DgiStatus::Internal,
    ];
    for status in statuses {
        let msg = dgi_status_message(status);
        assert!(!msg.is_null());
        let text = unsafe { CStr::from_ptr(msg) }.to_str().unwrap();
        assert!(!text.is_empty());
    }
}

#[test]
fn generated_header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/include/dualinv.h"
    ))
    .expect("header generated at build time");
    for symbol in [
        "dgi_matrix_new",
        "dgi_matrix_free",
        "dgi_inverse",
        "dgi_dual_index_is_one",
        "dgi_solve",
        "dgi_status_message",
        "DgiStatus_NotExist",
        "DgiKind_Dcgi",
        "typedef struct DgiMatrix DgiMatrix;",
    ] {
        assert!(header.contains(symbol), "header missing {symbol}");
    }
}
