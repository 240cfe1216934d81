use std::ffi::{c_char, CStr, CString};
use std::ptr;

use metacsp_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    metacsp_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = metacsp_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

#[test]
fn polynomials() {
    unsafe {
        let (mut a, mut b, mut p) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(metacsp_poly_parse(3, c("x1 - 1").as_ptr(), &mut a), MetacspStatus::Ok);
        assert_eq!(metacsp_poly_parse(3, c("x1 + 1").as_ptr(), &mut b), MetacspStatus::Ok);
        assert_eq!(metacsp_poly_mul(a, b, &mut p), MetacspStatus::Ok);
        assert_eq!(take(metacsp_poly_to_string(p)), "x1^2 - 1");
        let mut member = false;
        assert_eq!(metacsp_poly_in_h(p, 2, &mut member), MetacspStatus::Ok);
        assert!(member);
        assert_eq!(metacsp_poly_in_h(a, 2, &mut member), MetacspStatus::Ok);
        assert!(!member);
        assert_eq!(metacsp_poly_in_h(a, 0, &mut member), MetacspStatus::InvalidArgument);
        for h in [a, b, p] {
            metacsp_poly_free(h);
        }
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(metacsp_poly_parse(2, c("x1 + x7").as_ptr(), &mut p), MetacspStatus::Parse);
        assert!(p.is_null());
        assert!(last_error().contains("parse error"));
        assert_eq!(metacsp_poly_parse(2, ptr::null(), &mut p), MetacspStatus::NullPointer);
        assert_eq!(metacsp_poly_parse(2, c("1").as_ptr(), ptr::null_mut()), MetacspStatus::NullPointer);
        let invalid = [0xffu8, 0];
        assert_eq!(metacsp_poly_parse(2, invalid.as_ptr().cast(), &mut p), MetacspStatus::InvalidUtf8);
        assert!(metacsp_poly_to_string(ptr::null()).is_null());
        metacsp_poly_free(ptr::null_mut());
        metacsp_string_free(ptr::null_mut());
    }
}

#[test]
fn words() {
    unsafe {
        let mut trivial = true;
        assert_eq!(metacsp_word_is_identity(4, c("[x1,x2]").as_ptr(), &mut trivial), MetacspStatus::Ok);
        assert!(!trivial);
        assert_eq!(metacsp_word_is_identity(4, c("[[x1,x2],[x3,x4]]").as_ptr(), &mut trivial), MetacspStatus::Ok);
        assert!(trivial);
    }
}

#[test]
fn matrices() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(metacsp_matrix_build(4, c("row(2,1,3,4)").as_ptr(), &mut m), MetacspStatus::Ok);
        assert_eq!(metacsp_matrix_size(m), 4);
        let mut ia = false;
        assert_eq!(metacsp_matrix_is_ia(m, &mut ia), MetacspStatus::Ok);
        assert!(ia);
        let mut e = ptr::null_mut();
        assert_eq!(metacsp_matrix_entry(m, 2, 3, &mut e), MetacspStatus::Ok);
        assert_eq!(take(metacsp_poly_to_string(e)), "4*x1 - 4");
        metacsp_poly_free(e);
        assert_eq!(metacsp_matrix_entry(m, 5, 1, &mut e), MetacspStatus::InvalidArgument);

        let text = take(metacsp_matrix_to_string(m));
        let mut back = ptr::null_mut();
        assert_eq!(metacsp_matrix_parse(c(&text).as_ptr(), &mut back), MetacspStatus::Ok);
        assert_eq!(take(metacsp_matrix_to_string(back)), text);
        metacsp_matrix_free(back);
        metacsp_matrix_free(m);
    }
}

#[test]
fn decomposition_round_trip() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(metacsp_matrix_build(4, c("mul(pow(elem(1,2),16), row(3,2,4,4*x1))").as_ptr(), &mut m), MetacspStatus::Ok);
        let mut cert = ptr::null_mut();
        assert_eq!(metacsp_decompose(m, 2, &mut cert), MetacspStatus::Ok);
        assert!(metacsp_certificate_factor_count(cert) > 0);
        let mut bad = 0usize;
        assert_eq!(metacsp_certificate_check(cert, &mut bad), MetacspStatus::Ok);

        let mut product = ptr::null_mut();
        assert_eq!(metacsp_certificate_product(cert, &mut product), MetacspStatus::Ok);
        assert_eq!(take(metacsp_matrix_to_string(product)), take(metacsp_matrix_to_string(m)));
        metacsp_matrix_free(product);

        let json = take(metacsp_certificate_to_json(cert));
        let mut again = ptr::null_mut();
        assert_eq!(metacsp_certificate_from_json(c(&json).as_ptr(), &mut again), MetacspStatus::Ok);
        assert_eq!(metacsp_certificate_check(again, ptr::null_mut()), MetacspStatus::Ok);
        metacsp_certificate_free(again);

        // Tamper with the first factor's top-left entry.
        let mut v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let cell = &mut v["factors"][0]["matrix"][0][0];
        *cell = format!("{} + 2", cell.as_str().unwrap()).into();
        let mut tampered = ptr::null_mut();
        assert_eq!(metacsp_certificate_from_json(c(&v.to_string()).as_ptr(), &mut tampered), MetacspStatus::Ok);
        assert_eq!(metacsp_certificate_check(tampered, &mut bad), MetacspStatus::Verification);
        assert_eq!(bad, 0);
        assert!(last_error().starts_with("factor 0"));
        metacsp_certificate_free(tampered);

        assert_eq!(metacsp_certificate_from_json(c("{").as_ptr(), &mut again), MetacspStatus::Corrupt);
        metacsp_certificate_free(cert);
        metacsp_matrix_free(m);
    }
}

#[test]
fn decomposition_guards() {
    unsafe {
        let mut m = ptr::null_mut();
        let mut cert = ptr::null_mut();
        assert_eq!(metacsp_matrix_build(4, c("elem(1,2)").as_ptr(), &mut m), MetacspStatus::Ok);
        assert_eq!(metacsp_decompose(m, 2, &mut cert), MetacspStatus::Precondition);
        assert!(cert.is_null());
        metacsp_matrix_free(m);
        assert_eq!(metacsp_decompose(ptr::null(), 2, &mut cert), MetacspStatus::NullPointer);
    }
}

#[test]
fn header_is_valid_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/metacsp.h");
    let text = std::fs::read_to_string(header).unwrap();
    for f in ["metacsp_decompose", "metacsp_certificate_check", "metacsp_last_error", "typedef struct MetacspPoly MetacspPoly"] {
        assert!(text.contains(f), "header lacks {f}");
    }
    // Compile-check the header when a C compiler is around.
    if let Ok(status) = std::process::Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header]).status() {
        assert!(status.success(), "header does not compile");
    }
}
