//! C ABI for the qsp-braid engine.
//!
//! All objects cross the boundary as opaque handles created and destroyed by
//! this library.  Every fallible function returns a [`QspbStatus`]; on
//! failure a human-readable message is available from
//! [`qspb_last_error`] on the same thread.  Strings returned by the library
//! must be released with [`qspb_string_free`].
//!
//! ```c
//! QspbContext *ctx = NULL;
//! if (qspb_context_new(5, 2, false, &ctx) != QSPB_STATUS_OK) { ... }
//! QspbExpr *e = NULL;
//! qspb_parse(ctx, "ct[r](ctinv[r](B[r])) - B[r]", &e);
//! bool zero = false;
//! qspb_expr_is_zero(ctx, e, &zero);
//! qspb_expr_free(e);
//! qspb_context_free(ctx);
//! ```

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qsp_braid::braidaction::MapSet;
use qsp_braid::expr::Expr;
use qsp_braid::parser::{parse, Scope};
use qsp_braid::qsp::Params;
use qsp_braid::rootdata::SatakeDatum;
use qsp_braid::suites::{resolve, run_suites, CheckReport, Oracles, RunConfig, Status, Suite};
use qsp_braid::uqcore::{NormalElement, Pbw};

/// Result codes of the C API.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QspbStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// `(n, r)` violates `1 <= r <= ceil(n/2) - 1`.
    InadmissibleDatum = 3,
    /// The expression did not parse.
    ParseError = 4,
    /// The expression parsed but could not be evaluated.
    EvalError = 5,
    /// Unknown suite or oracle name.
    UnknownName = 6,
    /// Index past the end of a report.
    OutOfRange = 7,
    /// An internal error was caught at the boundary.
    Internal = 8,
}

/// Per-check verdicts as reported by [`qspb_report_status`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QspbCheckStatus {
    Pass = 0,
    Fail = 1,
    Skipped = 2,
    ResourceSkip = 3,
}

/// A Satake datum together with a parameter family.
pub struct QspbContext {
    maps: MapSet,
}

/// A parsed expression.
pub struct QspbExpr {
    expr: Expr,
}

/// The reports of one verification run.
pub struct QspbReport {
    reports: Vec<CheckReport>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Run `f`, converting panics into [`QspbStatus::Internal`].
fn guard(f: impl FnOnce() -> Result<(), (QspbStatus, String)>) -> QspbStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QspbStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "internal error".into());
            set_error(msg);
            QspbStatus::Internal
        }
    }
}

fn null(what: &str) -> (QspbStatus, String) {
    (QspbStatus::NullPointer, format!("{what} is NULL"))
}

/// # Safety
/// `p` must be NULL or point to a NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (QspbStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (QspbStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn normal_form(ctx: &QspbContext, e: &Expr) -> Result<NormalElement, (QspbStatus, String)> {
    let p = &ctx.maps.params;
    p.evaluate(&Pbw { n: p.n() }, &resolve(p, e))
        .map_err(|e| (QspbStatus::EvalError, e.to_string()))
}

/// The message of the last failed call on this thread, or NULL.  The
/// pointer stays valid until the next call into the library.
#[no_mangle]
pub extern "C" fn qspb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map(|s| s.as_ptr()).unwrap_or(ptr::null()))
}

/// Release a string returned by the library.
///
/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qspb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Create a context for the datum `(n, r)`.  With `symmetric` the
/// parameters satisfy `c_r = c_tau(r)` (needed for `phi`); otherwise they
/// are generic.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qspb_context_new(n: usize, r: usize, symmetric: bool, out: *mut *mut QspbContext) -> QspbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let d = SatakeDatum::new(n, r).map_err(|e| (QspbStatus::InadmissibleDatum, e.to_string()))?;
        let params = if symmetric { Params::symmetric(d) } else { Params::generic(d) };
        *out = Box::into_raw(Box::new(QspbContext { maps: MapSet::new(params) }));
        Ok(())
    })
}

/// # Safety
/// `ctx` must be NULL or a handle from [`qspb_context_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qspb_context_free(ctx: *mut QspbContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Parse `src` against the context.  Maps such as `ct[i](…)` are applied
/// during parsing.
///
/// # Safety
/// `ctx` must be a live context, `src` a NUL-terminated string and `out`
/// writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qspb_parse(ctx: *const QspbContext, src: *const c_char, out: *mut *mut QspbExpr) -> QspbStatus {
    guard(|| {
        let ctx = ctx.as_ref().ok_or_else(|| null("ctx"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let src = read_str(src, "src")?;
        let expr = parse(src, &Scope::with_maps(&ctx.maps)).map_err(|e| (QspbStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(QspbExpr { expr }));
        Ok(())
    })
}

/// # Safety
/// `e` must be NULL or a handle from [`qspb_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qspb_expr_free(e: *mut QspbExpr) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Render the expression tree in the input grammar.  Returns NULL if `e`
/// is NULL.
///
/// # Safety
/// `e` must be NULL or a live expression handle.
#[no_mangle]
pub unsafe extern "C" fn qspb_expr_render(e: *const QspbExpr) -> *mut c_char {
    match e.as_ref() {
        Some(e) => into_c_string(e.expr.render()),
        None => ptr::null_mut(),
    }
}

/// Evaluate to PBW normal form and return its rendering in `*out`.
///
/// # Safety
/// `ctx` and `e` must be live handles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qspb_expr_normal_form(ctx: *const QspbContext, e: *const QspbExpr, out: *mut *mut c_char) -> QspbStatus {
    guard(|| {
        let ctx = ctx.as_ref().ok_or_else(|| null("ctx"))?;
        let e = e.as_ref().ok_or_else(|| null("e"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = into_c_string(normal_form(ctx, &e.expr)?.render());
        Ok(())
    })
}

/// Decide whether the expression is zero in U_q.
///
/// # Safety
/// `ctx` and `e` must be live handles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qspb_expr_is_zero(ctx: *const QspbContext, e: *const QspbExpr, out: *mut bool) -> QspbStatus {
    guard(|| {
        let ctx = ctx.as_ref().ok_or_else(|| null("ctx"))?;
        let e = e.as_ref().ok_or_else(|| null("e"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = normal_form(ctx, &e.expr)?.is_zero();
        Ok(())
    })
}

/// Run a suite (`"all"` for every suite) with the given oracle
/// (`"pbw"`, `"elim"`, `"rep"` or `"all"`) on the context's datum.
/// `jobs = 0` uses one worker per core.
///
/// # Safety
/// `ctx` must be live, `suite` and `oracle` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qspb_verify(
    ctx: *const QspbContext,
    suite: *const c_char,
    oracle: *const c_char,
    jobs: usize,
    out: *mut *mut QspbReport,
) -> QspbStatus {
    guard(|| {
        let ctx = ctx.as_ref().ok_or_else(|| null("ctx"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let suite = read_str(suite, "suite")?;
        let oracle = read_str(oracle, "oracle")?;
        let suites = if suite == "all" {
            Suite::ALL.to_vec()
        } else {
            vec![Suite::from_name(suite).ok_or_else(|| (QspbStatus::UnknownName, format!("unknown suite `{suite}`")))?]
        };
        let oracles = Oracles::from_name(oracle).ok_or_else(|| (QspbStatus::UnknownName, format!("unknown oracle `{oracle}`")))?;
        let cfg = RunConfig { oracles, max_degree: None, jobs };
        let reports = run_suites(&ctx.maps.params.datum, &suites, &cfg);
        *out = Box::into_raw(Box::new(QspbReport { reports }));
        Ok(())
    })
}

/// # Safety
/// `rep` must be NULL or a handle from [`qspb_verify`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qspb_report_free(rep: *mut QspbReport) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// Number of checks in the report (0 for NULL).
///
/// # Safety
/// `rep` must be NULL or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn qspb_report_len(rep: *const QspbReport) -> usize {
    rep.as_ref().map(|r| r.reports.len()).unwrap_or(0)
}

/// Number of failed checks (0 for NULL).
///
/// # Safety
/// `rep` must be NULL or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn qspb_report_failures(rep: *const QspbReport) -> usize {
    rep.as_ref()
        .map(|r| r.reports.iter().filter(|c| c.status == Status::Fail).count())
        .unwrap_or(0)
}

/// Verdict of check `index`.
///
/// # Safety
/// `rep` must be a live report handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qspb_report_status(rep: *const QspbReport, index: usize, out: *mut QspbCheckStatus) -> QspbStatus {
    guard(|| {
        let rep = rep.as_ref().ok_or_else(|| null("rep"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let c = rep.reports.get(index).ok_or_else(|| (QspbStatus::OutOfRange, format!("index {index} ≥ {}", rep.reports.len())))?;
        *out = match c.status {
            Status::Pass => QspbCheckStatus::Pass,
            Status::Fail => QspbCheckStatus::Fail,
            Status::Skipped => QspbCheckStatus::Skipped,
            Status::ResourceSkip => QspbCheckStatus::ResourceSkip,
        };
        Ok(())
    })
}

/// Check `index` as one JSON object (the same line `qspb verify` prints).
///
/// # Safety
/// `rep` must be a live report handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qspb_report_json(rep: *const QspbReport, index: usize, out: *mut *mut c_char) -> QspbStatus {
    guard(|| {
        let rep = rep.as_ref().ok_or_else(|| null("rep"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let c = rep.reports.get(index).ok_or_else(|| (QspbStatus::OutOfRange, format!("index {index} ≥ {}", rep.reports.len())))?;
        let json = serde_json::to_string(c).map_err(|e| (QspbStatus::Internal, e.to_string()))?;
        *out = into_c_string(json);
        Ok(())
    })
}
