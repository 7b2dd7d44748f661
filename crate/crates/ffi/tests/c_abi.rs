use std::ffi::{CStr, CString};
use std::ptr;

use setalg_ffi::*;

unsafe fn take_string(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    setalg_string_free(s);
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(setalg_last_error()).to_str().unwrap().to_string() }
}

#[test]
fn e_times_e_is_twice_pairs() {
    unsafe {
        let mut e = ptr::null_mut();
        assert_eq!(setalg_function_e(4, &mut e), SetalgStatus::Ok);
        let mut ee = ptr::null_mut();
        assert_eq!(setalg_product(e, e, &mut ee), SetalgStatus::Ok);
        assert_eq!(setalg_function_degree(ee), 2);
        assert_eq!(setalg_function_support_len(ee), 6);
        let mut v = ptr::null_mut();
        assert_eq!(setalg_function_value(ee, 0b0101, &mut v), SetalgStatus::Ok);
        assert_eq!(take_string(v), "2");
        setalg_function_free(ee);
        setalg_function_free(e);
    }
}

#[test]
fn json_round_trip() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(setalg_function_new(5, 2, &mut f), SetalgStatus::Ok);
        assert_eq!(setalg_function_set(f, 0b00011, -3, 4), SetalgStatus::Ok);
        assert_eq!(setalg_function_set(f, 0b10100, 1, 1), SetalgStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(setalg_function_to_json(f, &mut s), SetalgStatus::Ok);
        let json = take_string(s);
        let c = CString::new(json.clone()).unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(setalg_function_from_json(c.as_ptr(), &mut g), SetalgStatus::Ok);
        let mut s2 = ptr::null_mut();
        setalg_function_to_json(g, &mut s2);
        assert_eq!(take_string(s2), json);
        let mut v = ptr::null_mut();
        setalg_function_value(g, 0b00011, &mut v);
        assert_eq!(take_string(v), "-3/4");
        setalg_function_free(f);
        setalg_function_free(g);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(setalg_function_new(65, 1, &mut f), SetalgStatus::GroundTooLarge);
        assert!(!last_error().is_empty());
        assert_eq!(setalg_function_new(3, 1, &mut f), SetalgStatus::Ok);
        assert_ne!(setalg_function_set(f, 0b11, 1, 1), SetalgStatus::Ok);
        assert_eq!(setalg_function_set(f, 0b1, 1, 0), SetalgStatus::InvalidArgument);
        assert_eq!(setalg_function_set(ptr::null_mut(), 0b1, 1, 1), SetalgStatus::NullPointer);
        assert_eq!(setalg_function_support_len(ptr::null()), 0);
        let bad = CString::new("{not json").unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(setalg_function_from_json(bad.as_ptr(), &mut g), SetalgStatus::InvalidArgument);
        setalg_function_free(f);
        setalg_function_free(ptr::null_mut());
        setalg_string_free(ptr::null_mut());
    }
}

#[test]
fn tau_of_triangle_edges() {
    let sets = [0b011u64, 0b110, 0b101];
    let (mut t, mut w) = (0usize, 0u64);
    unsafe {
        assert_eq!(setalg_tau(3, sets.as_ptr(), sets.len(), &mut t, &mut w), SetalgStatus::Ok);
    }
    assert_eq!(t, 2);
    assert!(sets.iter().all(|s| s & w != 0));
}

#[test]
fn gadget_pairs_verify() {
    unsafe {
        for n in 1..=3 {
            let mut p = ptr::null_mut();
            assert_eq!(setalg_gadget_tau1n(n, &mut p), SetalgStatus::Ok);
            let (mut t, mut w) = (0usize, 0u64);
            assert_eq!(setalg_pair_verify(p, &mut t, &mut w), SetalgStatus::Ok);
            assert_eq!(t, 2 * n);
            setalg_pair_free(p);
        }
        let mut p = ptr::null_mut();
        assert_eq!(setalg_gadget_lower(2, 2, &mut p), SetalgStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(setalg_pair_certificate_json(p, 7, &mut s), SetalgStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
        assert_eq!(v["tau"], 7);
        assert_eq!(v["match"], true);
        setalg_pair_free(p);

        let mut q = ptr::null_mut();
        assert_eq!(setalg_two_squares(&mut q), SetalgStatus::Ok);
        let (mut t, mut w) = (0usize, 0u64);
        setalg_pair_verify(q, &mut t, &mut w);
        assert_eq!(t, 7);
        setalg_pair_free(q);
    }
}

#[test]
fn pair_new_rejects_non_divisors() {
    unsafe {
        let mut e = ptr::null_mut();
        setalg_function_e(4, &mut e);
        let mut p = ptr::null_mut();
        assert_eq!(setalg_pair_new(e, e, &mut p), SetalgStatus::NotZeroDivisor);
        assert!(p.is_null());

        let mut g = ptr::null_mut();
        assert_eq!(setalg_cofactor(e, 1, &mut g), SetalgStatus::NotFound);
        assert!(g.is_null());

        let mut f = ptr::null_mut();
        setalg_function_new(2, 1, &mut f);
        setalg_function_set(f, 0b01, 1, 1);
        setalg_function_set(f, 0b10, -1, 1);
        assert_eq!(setalg_cofactor(f, 1, &mut g), SetalgStatus::Ok);
        assert_eq!(setalg_pair_new(f, g, &mut p), SetalgStatus::Ok);
        let (mut fo, mut go) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(setalg_pair_components(p, &mut fo, &mut go), SetalgStatus::Ok);
        assert_eq!(setalg_function_support_len(fo), 2);
        for h in [e, f, g, fo, go] {
            setalg_function_free(h);
        }
        setalg_pair_free(p);
    }
}

#[test]
fn bound_string() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(setalg_bound_expr(2, 2, &mut s), SetalgStatus::Ok);
        assert_eq!(take_string(s), "2·(R²_{5^30}(4)+2)");
    }
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/setalg.h")).unwrap();
    for name in [
        "setalg_last_error",
        "setalg_string_free",
        "setalg_function_new",
        "setalg_function_e",
        "setalg_function_set",
        "setalg_function_value",
        "setalg_function_support_len",
        "setalg_function_to_json",
        "setalg_function_from_json",
        "setalg_product",
        "setalg_cofactor",
        "setalg_function_free",
        "setalg_tau",
        "setalg_pair_new",
        "setalg_gadget_tau1n",
        "setalg_gadget_lower",
        "setalg_two_squares",
        "setalg_pair_components",
        "setalg_pair_verify",
        "setalg_pair_certificate_json",
        "setalg_pair_free",
        "setalg_bound_expr",
        "typedef struct SetalgFunction SetalgFunction",
        "SETALG_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
