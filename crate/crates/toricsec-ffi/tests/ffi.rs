//! Exercise the C ABI from Rust, through the same extern "C" entry points a C
//! caller would use.

use std::ffi::CStr;
use std::os::raw::c_char;
use std::ptr;

use toricsec_ffi::*;

unsafe fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    toricsec_string_free(p);
    s
}

unsafe fn open(a: &[i64], b: &[i64]) -> *mut ToricsecPolytope {
    let mut h: *mut ToricsecPolytope = ptr::null_mut();
    let rc = toricsec_polytope_new(a.as_ptr(), b.as_ptr(), a.len(), &mut h);
    assert_eq!(rc, TORICSEC_OK);
    assert!(!h.is_null());
    h
}

#[test]
fn polytope_handle_accessors() {
    unsafe {
        let h = open(&[1, 2], &[1, 2]);
        assert_eq!(toricsec_polytope_dim(h), 3);
        assert_eq!(toricsec_polytope_point_count(h), 8);
        assert!(toricsec_polytope_facet_count(h) > 0);
        toricsec_polytope_free(h);
    }
}

#[test]
fn null_and_invalid_arguments() {
    unsafe {
        let mut h: *mut ToricsecPolytope = ptr::null_mut();
        assert_eq!(
            toricsec_polytope_new(ptr::null(), ptr::null(), 2, &mut h),
            TORICSEC_ERR_INVALID
        );
        let bad_a = [0i64, 1];
        let b = [1i64, 1];
        assert_eq!(
            toricsec_polytope_new(bad_a.as_ptr(), b.as_ptr(), 2, &mut h),
            TORICSEC_ERR_INVALID
        );
        assert_eq!(toricsec_polytope_dim(ptr::null()), -1);
        assert_eq!(toricsec_polytope_point_count(ptr::null()), 0);
        let mut s: *mut c_char = ptr::null_mut();
        assert_eq!(toricsec_classify_json(ptr::null(), &mut s), TORICSEC_ERR_INVALID);
        // freeing null is a no-op
        toricsec_polytope_free(ptr::null_mut());
        toricsec_string_free(ptr::null_mut());
    }
}

#[test]
fn classify_json_round_trips() {
    unsafe {
        let h = open(&[1, 1], &[2, 2]);
        let mut s: *mut c_char = ptr::null_mut();
        assert_eq!(toricsec_classify_json(h, &mut s), TORICSEC_OK);
        let doc: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
        assert_eq!(doc["classification"]["tag"], "G5");
        assert_eq!(doc["classification"]["agree"], true);
        toricsec_polytope_free(h);
    }
}

#[test]
fn facets_singular_normality_json() {
    unsafe {
        let h = open(&[1, 1, 2], &[1, 1, 1]);
        let mut s: *mut c_char = ptr::null_mut();

        assert_eq!(toricsec_facets_json(h, &mut s), TORICSEC_OK);
        let doc: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
        assert_eq!(doc["facet_check"]["agree"], true);

        assert_eq!(toricsec_singular_json(h, &mut s), TORICSEC_OK);
        let doc: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
        assert_eq!(doc["expected_count"], 1);
        assert_eq!(doc["components"].as_array().unwrap().len(), 1);
        assert_eq!(doc["descriptions"][0], "P^1 x P^1 x Sec(v_2(P^1))");

        assert_eq!(toricsec_normality_json(h, 3, &mut s), TORICSEC_OK);
        let doc: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
        assert_eq!(doc["normality"]["normal_up_to"], 3);
        assert_eq!(doc["saturation"]["saturated"], true);

        toricsec_polytope_free(h);
    }
}

#[test]
fn generated_header_exists_and_declares_api() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/toricsec.h");
    let text = std::fs::read_to_string(header).expect("cbindgen header missing");
    for sym in [
        "toricsec_polytope_new",
        "toricsec_polytope_free",
        "toricsec_polytope_dim",
        "toricsec_classify_json",
        "toricsec_string_free",
        "ToricsecPolytope",
    ] {
        assert!(text.contains(sym), "header missing {}", sym);
    }
}
