//! Exercises the C ABI from Rust through the same entry points a C caller
//! uses.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use qsp_braid_ffi::*;

fn owned(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { qspb_string_free(s) };
    out
}

fn last_error() -> String {
    let p = qspb_last_error();
    assert!(!p.is_null(), "expected an error message");
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn context(n: usize, r: usize, symmetric: bool) -> *mut QspbContext {
    let mut ctx = ptr::null_mut();
    assert_eq!(unsafe { qspb_context_new(n, r, symmetric, &mut ctx) }, QspbStatus::Ok);
    ctx
}

fn parsed(ctx: *const QspbContext, src: &str) -> *mut QspbExpr {
    let src = CString::new(src).unwrap();
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { qspb_parse(ctx, src.as_ptr(), &mut e) }, QspbStatus::Ok, "{}", last_error());
    e
}

#[test]
fn inadmissible_datum_is_reported() {
    let mut ctx = ptr::null_mut();
    assert_eq!(unsafe { qspb_context_new(4, 2, false, &mut ctx) }, QspbStatus::InadmissibleDatum);
    assert!(ctx.is_null());
    assert!(last_error().contains("ceil(n/2) - 1"));
}

#[test]
fn null_arguments_are_rejected() {
    assert_eq!(unsafe { qspb_context_new(5, 2, false, ptr::null_mut()) }, QspbStatus::NullPointer);
    let mut e = ptr::null_mut();
    let src = CString::new("E[1]").unwrap();
    assert_eq!(unsafe { qspb_parse(ptr::null(), src.as_ptr(), &mut e) }, QspbStatus::NullPointer);
    assert!(unsafe { qspb_expr_render(ptr::null()) }.is_null());
    assert_eq!(unsafe { qspb_report_len(ptr::null()) }, 0);
}

#[test]
fn parse_render_and_evaluate() {
    let ctx = context(5, 2, false);
    let e = parsed(ctx, "ct[r](ctinv[r](B[r])) - B[r]");
    let mut zero = false;
    assert_eq!(unsafe { qspb_expr_is_zero(ctx, e, &mut zero) }, QspbStatus::Ok);
    assert!(zero);
    unsafe { qspb_expr_free(e) };

    let e = parsed(ctx, "E[1]*F[1] - F[1]*E[1]");
    let rendered = owned(unsafe { qspb_expr_render(e) });
    let again = parsed(ctx, &rendered);
    assert_eq!(owned(unsafe { qspb_expr_render(again) }), rendered);
    let mut nf = ptr::null_mut();
    assert_eq!(unsafe { qspb_expr_normal_form(ctx, e, &mut nf) }, QspbStatus::Ok);
    let nf = owned(nf);
    assert!(nf.contains("K[(2,-1,0,0,0)]"), "{nf}");
    unsafe {
        qspb_expr_free(e);
        qspb_expr_free(again);
        qspb_context_free(ctx);
    }
}

#[test]
fn parse_errors_carry_positions() {
    let ctx = context(3, 1, false);
    let src = CString::new("E[1] + E[9]").unwrap();
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { qspb_parse(ctx, src.as_ptr(), &mut e) }, QspbStatus::ParseError);
    assert!(last_error().starts_with("at position 9"));
    let phi = CString::new("phi(B[1])").unwrap();
    assert_eq!(unsafe { qspb_parse(ctx, phi.as_ptr(), &mut e) }, QspbStatus::ParseError);
    assert!(last_error().contains("symmetric"));
    unsafe { qspb_context_free(ctx) };
}

#[test]
fn verify_reports() {
    let ctx = context(3, 1, false);
    let suite = CString::new("braid").unwrap();
    let oracle = CString::new("pbw").unwrap();
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { qspb_verify(ctx, suite.as_ptr(), oracle.as_ptr(), 1, &mut rep) }, QspbStatus::Ok);
    let len = unsafe { qspb_report_len(rep) };
    assert!(len > 0);
    assert_eq!(unsafe { qspb_report_failures(rep) }, 0);
    let mut st = QspbCheckStatus::Fail;
    assert_eq!(unsafe { qspb_report_status(rep, 0, &mut st) }, QspbStatus::Ok);
    assert_eq!(st, QspbCheckStatus::Skipped);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { qspb_report_json(rep, 0, &mut json) }, QspbStatus::Ok);
    assert!(owned(json).contains("\"status\":\"skipped\""));
    assert_eq!(unsafe { qspb_report_status(rep, len, &mut st) }, QspbStatus::OutOfRange);

    let bad = CString::new("nope").unwrap();
    let mut rep2 = ptr::null_mut();
    assert_eq!(unsafe { qspb_verify(ctx, bad.as_ptr(), oracle.as_ptr(), 1, &mut rep2) }, QspbStatus::UnknownName);
    unsafe {
        qspb_report_free(rep);
        qspb_context_free(ctx);
    }
}
