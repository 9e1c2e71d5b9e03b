use std::ffi::{CStr, CString};
use std::ptr;

use serde_json::Value;
use sparsereal_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

/// Takes ownership of a library string.
unsafe fn take(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    sr_string_free(p);
    s
}

unsafe fn last_error() -> String {
    let p = sr_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_owned()
}

#[test]
fn system_handle_lifecycle() {
    unsafe {
        let mut sys = ptr::null_mut();
        let json = c(r#"{"n": 2, "equations": ["3 + 2*x1^5 - 7*x2^3"]}"#);
        assert_eq!(sr_system_from_json(json.as_ptr(), &mut sys), SrStatus::Ok);
        assert_eq!(sr_system_dimension(sys), 2);
        let mut out = ptr::null_mut();
        assert_eq!(sr_system_volume_bound(sys, &mut out), SrStatus::Ok);
        assert_eq!(take(out), "30");
        assert_eq!(sr_system_bound_report(sys, &mut out), SrStatus::Ok);
        let report: Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(report["schema"], "1");
        sr_system_free(sys);
        sr_system_free(ptr::null_mut());
    }
}

#[test]
fn ksum_solve_and_alternations() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(
            sr_ksum_parse(c("x^3 - 2*x + 2").as_ptr(), &mut f),
            SrStatus::Ok
        );
        assert_eq!(sr_ksum_sign_alternations(f), 2);
        let mut out = ptr::null_mut();
        assert_eq!(
            sr_ksum_solve(f, c("2").as_ptr(), c("1e-6").as_ptr(), 0, &mut out),
            SrStatus::SolverError
        );
        assert!(last_error().starts_with("too_many_alternations"));
        assert!(out.is_null());
        sr_ksum_free(f);

        assert_eq!(
            sr_ksum_parse(c("x^(7/3) - 3*x^0.5 - 1").as_ptr(), &mut f),
            SrStatus::Ok
        );
        assert_eq!(
            sr_ksum_solve(
                f,
                c("10").as_ptr(),
                c("1/1000000000000").as_ptr(),
                256,
                &mut out
            ),
            SrStatus::Ok
        );
        let root: Value = serde_json::from_str(&take(out)).unwrap();
        let x = root["value"].as_f64().unwrap();
        assert!((x.powf(7.0 / 3.0) - 3.0 * x.sqrt() - 1.0).abs() < 1e-9);
        assert_eq!(sr_ksum_sign_alternations(ptr::null()), usize::MAX);
        sr_ksum_free(f);
    }
}

#[test]
fn smith_form_outputs() {
    unsafe {
        let a = [4i64, 6, 8, 10];
        let mut d = [0i64; 2];
        assert_eq!(
            sr_smith_diagonal(a.as_ptr(), 2, d.as_mut_ptr()),
            SrStatus::Ok
        );
        assert_eq!(d, [2, 4]);
        let mut out = ptr::null_mut();
        assert_eq!(sr_smith_json(a.as_ptr(), 2, &mut out), SrStatus::Ok);
        let v: Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["D"].to_string(), "[2,4]");
        assert_eq!(
            sr_smith_diagonal(ptr::null(), 2, d.as_mut_ptr()),
            SrStatus::NullPointer
        );
    }
}

#[test]
fn binomial_and_volume() {
    unsafe {
        let mut out = ptr::null_mut();
        let json =
            c(r#"{"D": [[2, 1], [1, 1]], "c": [-12, -6], "R": 10, "epsilon": "1/10000000000"}"#);
        assert_eq!(sr_binomial_solve(json.as_ptr(), 0, &mut out), SrStatus::Ok);
        let v: Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["complex_root_count"], 1);
        let singular = c(r#"{"D": [[1, 1], [1, 1]], "c": [-1, -1], "R": 10, "epsilon": "1/100"}"#);
        assert_eq!(
            sr_binomial_solve(singular.as_ptr(), 0, &mut out),
            SrStatus::SolverError
        );

        let pts = [0i64, 0, 1, 0, 0, 1, 5, 0, 0, 3];
        assert_eq!(
            sr_normalized_volume(pts.as_ptr(), 5, 2, &mut out),
            SrStatus::Ok
        );
        assert_eq!(take(out), "15");
    }
}

#[test]
fn invalid_arguments_map_to_status_codes() {
    unsafe {
        let mut sys = ptr::null_mut();
        assert_eq!(
            sr_system_from_json(ptr::null(), &mut sys),
            SrStatus::NullPointer
        );
        assert_eq!(
            sr_system_from_json(c("{not json").as_ptr(), &mut sys),
            SrStatus::ParseError
        );
        let bad = [0xffu8, 0];
        assert_eq!(
            sr_system_from_json(bad.as_ptr().cast(), &mut sys),
            SrStatus::InvalidUtf8
        );
        let mut f = ptr::null_mut();
        assert_eq!(
            sr_ksum_parse(c("x^^2").as_ptr(), &mut f),
            SrStatus::ParseError
        );
        assert!(f.is_null());
        let mut out = ptr::null_mut();
        assert_eq!(
            sr_system_volume_bound(ptr::null(), &mut out),
            SrStatus::NullPointer
        );
        let v = CStr::from_ptr(sr_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
}
