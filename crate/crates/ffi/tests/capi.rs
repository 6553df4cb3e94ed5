use std::ffi::{CStr, CString};
use std::ptr;

use scinv_ffi::*;

fn last_error() -> String {
    let p = scinv_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn from_json(text: &str) -> *mut ScinvMatrix {
    let c = CString::new(text).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { scinv_matrix_from_json(c.as_ptr(), &mut m) },
        ScinvStatus::Ok
    );
    m
}

fn to_json(m: *const ScinvMatrix) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { scinv_matrix_to_json(m, &mut s) }, ScinvStatus::Ok);
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { scinv_string_free(s) };
    out
}

const WORKED: &str = r#"{"rows":3,"cols":3,"data":[[4,-1,2],[7,-2,3],[-4,1,-2]]}"#;

#[test]
fn exact_sc_inverse_of_worked_example() {
    let a = from_json(WORKED);
    assert!(unsafe { scinv_matrix_is_exact(a) });
    let mut x = ptr::null_mut();
    let st = unsafe {
        scinv_inverse(
            a,
            ScinvKind::ScJordan,
            ScinvBackend::Auto,
            ptr::null(),
            &mut x,
        )
    };
    assert_eq!(st, ScinvStatus::Ok);
    assert!(unsafe { scinv_matrix_is_exact(x) });
    let v: serde_json::Value = serde_json::from_str(&to_json(x)).unwrap();
    assert_eq!(
        v["data"],
        serde_json::json!([
            ["0/1", "15/1", "26/1"],
            ["0/1", "28/1", "49/1"],
            ["0/1", "-16/1", "-28/1"]
        ])
    );

    let (mut r1, mut r2) = (f64::NAN, f64::NAN);
    assert_eq!(
        unsafe { scinv_penrose_residuals(a, x, &mut r1, &mut r2) },
        ScinvStatus::Ok
    );
    assert_eq!((r1, r2), (0.0, 0.0));
    unsafe {
        scinv_matrix_free(x);
        scinv_matrix_free(a);
    }
}

#[test]
fn float_mp_inverse_round_trip() {
    let data = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
    let mut a = ptr::null_mut();
    assert_eq!(
        unsafe { scinv_matrix_from_real(2, 3, data.as_ptr(), &mut a) },
        ScinvStatus::Ok
    );
    assert_eq!(
        unsafe { (scinv_matrix_rows(a), scinv_matrix_cols(a)) },
        (2, 3)
    );

    let mut x = ptr::null_mut();
    let opts = scinv_options_default();
    let st = unsafe { scinv_inverse(a, ScinvKind::Mp, ScinvBackend::Float, &opts, &mut x) };
    assert_eq!(st, ScinvStatus::Ok);
    assert_eq!(
        unsafe { (scinv_matrix_rows(x), scinv_matrix_cols(x)) },
        (3, 2)
    );

    let mut buf = [0.0; 6];
    assert_eq!(
        unsafe { scinv_matrix_copy_real(x, buf.as_mut_ptr(), 6) },
        ScinvStatus::Ok
    );
    // pinv([[1,2,3],[4,5,6]]) = [[-17,8],[-2,2],[13,-4]]/18
    let want = [-17.0, 8.0, -2.0, 2.0, 13.0, -4.0].map(|v| v / 18.0);
    for (g, w) in buf.iter().zip(want) {
        assert!((g - w).abs() < 1e-12, "{g} vs {w}");
    }
    let mut short = [0.0; 5];
    assert_eq!(
        unsafe { scinv_matrix_copy_real(x, short.as_mut_ptr(), 5) },
        ScinvStatus::InvalidArgument
    );
    unsafe {
        scinv_matrix_free(x);
        scinv_matrix_free(a);
    }
}

#[test]
fn complex_matrices_keep_imaginary_parts() {
    // diag(i, 2)
    let data = [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0];
    let mut a = ptr::null_mut();
    assert_eq!(
        unsafe { scinv_matrix_from_complex(2, 2, data.as_ptr(), &mut a) },
        ScinvStatus::Ok
    );
    let mut x = ptr::null_mut();
    let st = unsafe {
        scinv_inverse(
            a,
            ScinvKind::Drazin,
            ScinvBackend::Float,
            ptr::null(),
            &mut x,
        )
    };
    assert_eq!(st, ScinvStatus::Ok);
    let mut buf = [0.0; 8];
    assert_eq!(
        unsafe { scinv_matrix_copy_complex(x, buf.as_mut_ptr(), 8) },
        ScinvStatus::Ok
    );
    let want = [0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0];
    for (g, w) in buf.iter().zip(want) {
        assert!((g - w).abs() < 1e-12);
    }
    assert_eq!(
        unsafe { scinv_matrix_copy_real(x, buf.as_mut_ptr(), 8) },
        ScinvStatus::Unsupported
    );
    unsafe {
        scinv_matrix_free(x);
        scinv_matrix_free(a);
    }
}

#[test]
fn rationals_and_rga() {
    let (num, den) = ([1i64, 2, 3, 4], [1i64, 1, 1, 1]);
    let mut a = ptr::null_mut();
    let st = unsafe { scinv_matrix_from_rationals(2, 2, num.as_ptr(), den.as_ptr(), &mut a) };
    assert_eq!(st, ScinvStatus::Ok);
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { scinv_rga(a, ScinvKind::Mp, &mut g) },
        ScinvStatus::Ok
    );
    let v: serde_json::Value = serde_json::from_str(&to_json(g)).unwrap();
    assert_eq!(v["data"][0][0], "-2/1");
    unsafe { scinv_matrix_free(g) };

    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { scinv_rga(a, ScinvKind::Drazin, &mut g) },
        ScinvStatus::Unsupported
    );
    assert!(g.is_null());

    let bad_den = [1i64, 0, 1, 1];
    let mut b = ptr::null_mut();
    let st = unsafe { scinv_matrix_from_rationals(2, 2, num.as_ptr(), bad_den.as_ptr(), &mut b) };
    assert_eq!(st, ScinvStatus::Parse);
    unsafe { scinv_matrix_free(a) };
}

#[test]
fn errors_set_status_and_message() {
    let a = from_json(r#"{"rows":2,"cols":2,"data":[[2,1],[1,1]]}"#);
    let mut x = ptr::null_mut();
    let st = unsafe {
        scinv_inverse(
            a,
            ScinvKind::Drazin,
            ScinvBackend::Exact,
            ptr::null(),
            &mut x,
        )
    };
    assert_eq!(st, ScinvStatus::IrrationalSpectrum);
    assert!(x.is_null());
    assert!(!last_error().is_empty());

    // auto falls back to floating point
    let st = unsafe {
        scinv_inverse(
            a,
            ScinvKind::Drazin,
            ScinvBackend::Auto,
            ptr::null(),
            &mut x,
        )
    };
    assert_eq!(st, ScinvStatus::Ok);
    assert!(!unsafe { scinv_matrix_is_exact(x) });
    unsafe { scinv_matrix_free(x) };

    let mut x = ptr::null_mut();
    let st = unsafe { scinv_inverse(a, ScinvKind::Uc, ScinvBackend::Exact, ptr::null(), &mut x) };
    assert_eq!(st, ScinvStatus::Unsupported);
    unsafe { scinv_matrix_free(a) };

    let wide = from_json(r#"{"rows":1,"cols":2,"data":[[1,2]]}"#);
    let st = unsafe {
        scinv_inverse(
            wide,
            ScinvKind::Drazin,
            ScinvBackend::Auto,
            ptr::null(),
            &mut x,
        )
    };
    assert_eq!(st, ScinvStatus::NotSquare);
    unsafe { scinv_matrix_free(wide) };

    let bad = CString::new("{\"rows\":1}").unwrap();
    let st = unsafe { scinv_matrix_from_json(bad.as_ptr(), &mut x) };
    assert_eq!(st, ScinvStatus::Parse);
    assert!(last_error().contains("cols"));

    scinv_clear_last_error();
    assert!(scinv_last_error_message().is_null());
}

#[test]
fn null_pointers_are_rejected() {
    let mut x = ptr::null_mut();
    unsafe {
        assert_eq!(
            scinv_matrix_from_real(1, 1, ptr::null(), &mut x),
            ScinvStatus::NullPointer
        );
        assert_eq!(
            scinv_inverse(
                ptr::null(),
                ScinvKind::Mp,
                ScinvBackend::Auto,
                ptr::null(),
                &mut x
            ),
            ScinvStatus::NullPointer
        );
        assert_eq!(
            scinv_matrix_to_json(ptr::null(), ptr::null_mut()),
            ScinvStatus::NullPointer
        );
        assert_eq!(scinv_matrix_rows(ptr::null()), 0);
        scinv_matrix_free(ptr::null_mut());
        scinv_string_free(ptr::null_mut());
    }
}

#[test]
fn options_are_validated() {
    let a = from_json(r#"{"rows":2,"cols":2,"data":[[1,0],[0,1e-9]]}"#);
    let mut x = ptr::null_mut();
    let mut opts = scinv_options_default();
    opts.rank_mode = ScinvRankMode::Threshold;
    opts.threshold = -1.0;
    let st = unsafe { scinv_inverse(a, ScinvKind::Mp, ScinvBackend::Float, &opts, &mut x) };
    assert_eq!(st, ScinvStatus::InvalidArgument);

    opts.rank_mode = ScinvRankMode::Fixed;
    opts.rank = 1;
    let st = unsafe { scinv_inverse(a, ScinvKind::Mp, ScinvBackend::Float, &opts, &mut x) };
    assert_eq!(st, ScinvStatus::Ok);
    let mut buf = [0.0; 4];
    assert_eq!(
        unsafe { scinv_matrix_copy_real(x, buf.as_mut_ptr(), 4) },
        ScinvStatus::Ok
    );
    assert_eq!(buf, [1.0, 0.0, 0.0, 0.0]);
    unsafe {
        scinv_matrix_free(x);
        scinv_matrix_free(a);
    }
}

#[test]
fn version_and_header() {
    let v = unsafe { CStr::from_ptr(scinv_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/scinv.h")).unwrap();
    for sym in [
        "scinv_inverse",
        "scinv_last_error_message",
        "typedef struct ScinvMatrix ScinvMatrix",
        "SCINV_STATUS_OK",
    ] {
        assert!(header.contains(sym), "{sym}");
    }
}
