use std::ffi::{CStr, CString};
use std::ptr;

use rfgrowth_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = rfg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn context_lifecycle_and_rows() {
    let ctx = rfg_context_new_toy();
    assert!(!ctx.is_null());
    let mut row = RfgSequenceRow::default();
    unsafe {
        assert_eq!(rfg_sequence_row(ctx, 1, &mut row), RfgStatus::Ok);
        assert_eq!((row.n, row.f, row.d, row.q, row.r), (1, 17, 17, 1, 2));
        assert!(row.certified);
        assert_eq!(
            rfg_sequence_row(ctx, 0, &mut row),
            RfgStatus::InvalidArgument
        );
        assert_eq!(
            rfg_sequence_row(ctx, 2, ptr::null_mut()),
            RfgStatus::NullPointer
        );
        rfg_context_free(ctx);
        rfg_context_free(ptr::null_mut());
    }
    assert!(rfg_context_new_builtin(-1.0, 1.0).is_null());
    assert!(last_error().contains("positive"));
}

#[test]
fn word_problem_through_the_abi() {
    let ctx = rfg_context_new_toy();
    let mut out = false;
    unsafe {
        assert_eq!(
            rfg_is_trivial(ctx, cstr("bbb").as_ptr(), &mut out),
            RfgStatus::Ok
        );
        assert!(out);
        assert_eq!(
            rfg_is_trivial(ctx, cstr("b").as_ptr(), &mut out),
            RfgStatus::Ok
        );
        assert!(!out);
        assert_eq!(
            rfg_words_equal(ctx, cstr("ab").as_ptr(), cstr("aBB").as_ptr(), &mut out),
            RfgStatus::Ok
        );
        assert!(out);
        assert_eq!(
            rfg_words_equal(ctx, cstr("ba").as_ptr(), cstr("ab").as_ptr(), &mut out),
            RfgStatus::Ok
        );
        assert!(!out);
        assert_eq!(
            rfg_is_trivial(ctx, cstr("abc").as_ptr(), &mut out),
            RfgStatus::InvalidWord
        );
        assert!(last_error().contains("'c'"));
        assert_eq!(
            rfg_is_trivial(ctx, ptr::null(), &mut out),
            RfgStatus::NullPointer
        );
        assert_eq!(
            rfg_is_trivial(ptr::null(), cstr("a").as_ptr(), &mut out),
            RfgStatus::NullPointer
        );
        rfg_context_free(ctx);
    }
}

#[test]
fn witness_string_round_trip() {
    let ctx = rfg_context_new_toy();
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(rfg_witness(ctx, 1, &mut s), RfgStatus::Ok);
        assert_eq!(CStr::from_ptr(s).to_str().unwrap(), "BaaBAAbaabAA");
        rfg_string_free(s);
        assert_eq!(rfg_witness(ctx, 0, &mut s), RfgStatus::InvalidArgument);
        rfg_context_free(ctx);
    }
}

#[test]
fn free_functions() {
    let mut out = false;
    unsafe {
        assert_eq!(rfg_verify_alt_generation(7, 2, 3, &mut out), RfgStatus::Ok);
        assert!(out);
        assert_eq!(
            rfg_verify_alt_generation(8, 2, 3, &mut out),
            RfgStatus::InvalidArgument
        );
    }
    assert!(rfg_is_prime(2_305_843_009_213_693_951));
    assert!(!rfg_is_prime(561));
    assert!((rfg_log_factorial(10) - 3_628_800f64.ln()).abs() < 1e-12);
}

#[test]
fn bounds_through_the_abi() {
    let ctx = rfg_context_new_toy();
    let (mut a, mut b) = (0.0, 0.0);
    unsafe {
        assert_eq!(rfg_rf_upper(ctx, 1, &mut a), RfgStatus::Ok);
        assert_eq!(rfg_full_rf_upper(ctx, 1, &mut b), RfgStatus::Ok);
        rfg_context_free(ctx);
    }
    // d(1) = 17, d(2) = 37
    assert!((a - (rfg_log_factorial(17) - std::f64::consts::LN_2)).abs() < 1e-9);
    let want = rfg_log_factorial(17) + rfg_log_factorial(37) - 2.0 * std::f64::consts::LN_2;
    assert!((b - want).abs() < 1e-9);
}

#[test]
fn header_declares_the_abi() {
    let header = include_str!("../include/rfgrowth.h");
    for sym in [
        "typedef struct RfgContext RfgContext;",
        "RFG_STATUS_OK = 0",
        "struct RfgContext *rfg_context_new_toy(void);",
        "void rfg_context_free(struct RfgContext *ctx);",
        "const char *rfg_last_error(void);",
        "rfg_sequence_row(",
        "rfg_is_trivial(",
        "rfg_words_equal(",
        "rfg_witness(",
        "void rfg_string_free(char *s);",
        "rfg_verify_alt_generation(",
        "bool rfg_is_prime(uint64_t n);",
        "double rfg_log_factorial(uint64_t n);",
        "rfg_rf_upper(",
        "rfg_full_rf_upper(",
    ] {
        assert!(header.contains(sym), "missing {sym}");
    }
}
