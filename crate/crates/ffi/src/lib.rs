//! C ABI over `rfgrowth`.
//!
//! Contexts are opaque heap handles created by `rfg_context_new_*` and
//! released with `rfg_context_free`. Fallible calls return an
//! [`RfgStatus`] and write results through out-pointers; on failure the
//! message is available from `rfg_last_error` on the same thread until the
//! next failing call. No panic crosses the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rfgrowth::growth;
use rfgrowth::neumann::{GroupContext, NeumannError};
use rfgrowth::schreier;
use rfgrowth::seqgen::{self, GrowthProfile};
use rfgrowth::words::Word;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RfgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidWord = 3,
    SequenceError = 4,
    GroupError = 5,
    Panic = 6,
}

/// Opaque handle to a group together with its parameter sequences.
pub struct RfgContext {
    inner: GroupContext,
}

/// One row of the parameter sequences.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RfgSequenceRow {
    pub n: u64,
    pub f: u64,
    pub d: u64,
    pub q: u64,
    pub r: u64,
    /// All side conditions hold at this index.
    pub certified: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).unwrap()));
}

fn fail(status: RfgStatus, msg: impl Into<String>) -> RfgStatus {
    set_error(msg);
    status
}

fn group_status(e: NeumannError) -> RfgStatus {
    let status = match e {
        NeumannError::Seq(_) => RfgStatus::SequenceError,
        _ => RfgStatus::GroupError,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning a panic into `RfgStatus::Panic`.
fn guarded(f: impl FnOnce() -> RfgStatus) -> RfgStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(RfgStatus::Panic, "internal panic"))
}

unsafe fn context<'a>(ctx: *const RfgContext) -> Option<&'a GroupContext> {
    ctx.as_ref().map(|c| &c.inner)
}

unsafe fn word(s: *const c_char) -> Result<Word, RfgStatus> {
    if s.is_null() {
        return Err(fail(RfgStatus::NullPointer, "word is null"));
    }
    let text = CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(RfgStatus::InvalidWord, "word is not UTF-8"))?;
    text.parse()
        .map_err(|e: rfgrowth::words::WordError| fail(RfgStatus::InvalidWord, e.to_string()))
}

fn new_context(profile: GrowthProfile) -> *mut RfgContext {
    catch_unwind(|| {
        Box::into_raw(Box::new(RfgContext {
            inner: GroupContext::new(profile),
        }))
    })
    .unwrap_or(ptr::null_mut())
}

/// The toy profile `f(n) = 16n + 1`, `q(n) = n`.
#[no_mangle]
pub extern "C" fn rfg_context_new_toy() -> *mut RfgContext {
    new_context(GrowthProfile::toy())
}

/// The builtin profile `log F(n) = c·n·(ln n)²·(ln ln n)^{1+eps}`; null if
/// `c` or `eps` is not positive and finite.
#[no_mangle]
pub extern "C" fn rfg_context_new_builtin(c: f64, eps: f64) -> *mut RfgContext {
    if !(c.is_finite() && c > 0.0 && eps.is_finite() && eps > 0.0) {
        set_error("c and eps must be positive and finite");
        return ptr::null_mut();
    }
    new_context(GrowthProfile::builtin(c, eps))
}

/// # Safety
/// `ctx` is null or a handle from `rfg_context_new_*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rfg_context_free(ctx: *mut RfgContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// The last error message on this thread, or null. Owned by the library.
#[no_mangle]
pub extern "C" fn rfg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `ctx` is a live handle and `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rfg_sequence_row(
    ctx: *const RfgContext,
    n: u64,
    out: *mut RfgSequenceRow,
) -> RfgStatus {
    guarded(|| {
        let (Some(c), false) = (context(ctx), out.is_null()) else {
            return fail(RfgStatus::NullPointer, "null context or output");
        };
        if n == 0 {
            return fail(RfgStatus::InvalidArgument, "indices start at 1");
        }
        match c.seqs().row(n) {
            Ok(r) => {
                *out = RfgSequenceRow {
                    n: r.n,
                    f: r.f,
                    d: r.d,
                    q: r.q,
                    r: r.r,
                    certified: r.cert.all(),
                };
                RfgStatus::Ok
            }
            Err(e) => group_status(e.into()),
        }
    })
}

/// Whether the word (over `a A b B`) is trivial in the group.
///
/// # Safety
/// `ctx` is a live handle, `w` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rfg_is_trivial(
    ctx: *const RfgContext,
    w: *const c_char,
    out: *mut bool,
) -> RfgStatus {
    guarded(|| {
        let (Some(c), false) = (context(ctx), out.is_null()) else {
            return fail(RfgStatus::NullPointer, "null context or output");
        };
        let w = match word(w) {
            Ok(w) => w,
            Err(s) => return s,
        };
        match c.is_trivial(&w) {
            Ok(t) => {
                *out = t;
                RfgStatus::Ok
            }
            Err(e) => group_status(e),
        }
    })
}

/// # Safety
/// As for `rfg_is_trivial`, with two words.
#[no_mangle]
pub unsafe extern "C" fn rfg_words_equal(
    ctx: *const RfgContext,
    u: *const c_char,
    v: *const c_char,
    out: *mut bool,
) -> RfgStatus {
    guarded(|| {
        let (Some(c), false) = (context(ctx), out.is_null()) else {
            return fail(RfgStatus::NullPointer, "null context or output");
        };
        let (u, v) = match (word(u), word(v)) {
            (Ok(u), Ok(v)) => (u, v),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match c.equal(&u, &v) {
            Ok(t) => {
                *out = t;
                RfgStatus::Ok
            }
            Err(e) => group_status(e),
        }
    })
}

/// The checked witness word for coordinate `m`, as a new string to be
/// released with `rfg_string_free`.
///
/// # Safety
/// `ctx` is a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rfg_witness(
    ctx: *const RfgContext,
    m: u64,
    out: *mut *mut c_char,
) -> RfgStatus {
    guarded(|| {
        let (Some(c), false) = (context(ctx), out.is_null()) else {
            return fail(RfgStatus::NullPointer, "null context or output");
        };
        if m == 0 {
            return fail(RfgStatus::InvalidArgument, "indices start at 1");
        }
        match c.witness(m) {
            Ok(w) => {
                *out = CString::new(w.to_string()).unwrap().into_raw();
                RfgStatus::Ok
            }
            Err(e) => group_status(e),
        }
    })
}

/// # Safety
/// `s` is null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rfg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Whether `α = (0 … d-1)` and `β = (0, r1, r1+r2)` generate `Alt(d)`.
///
/// # Safety
/// `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rfg_verify_alt_generation(
    d: u64,
    r1: u64,
    r2: u64,
    out: *mut bool,
) -> RfgStatus {
    guarded(|| {
        if out.is_null() {
            return fail(RfgStatus::NullPointer, "null output");
        }
        match schreier::verify_alt_generation(d as usize, r1 as usize, r2 as usize) {
            Ok(t) => {
                *out = t;
                RfgStatus::Ok
            }
            Err(e) => fail(RfgStatus::InvalidArgument, e.to_string()),
        }
    })
}

#[no_mangle]
pub extern "C" fn rfg_is_prime(n: u64) -> bool {
    seqgen::is_prime(n)
}

/// `ln n!`.
#[no_mangle]
pub extern "C" fn rfg_log_factorial(n: u64) -> f64 {
    growth::log_factorial(n).ln()
}

/// `ln(d(n)!/2)`, the upper bound on the residual finiteness growth at `n`.
///
/// # Safety
/// `ctx` is a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rfg_rf_upper(ctx: *const RfgContext, n: u64, out: *mut f64) -> RfgStatus {
    guarded(|| {
        let (Some(c), false) = (context(ctx), out.is_null()) else {
            return fail(RfgStatus::NullPointer, "null context or output");
        };
        if n == 0 {
            return fail(RfgStatus::InvalidArgument, "indices start at 1");
        }
        match growth::rf_upper(c, n) {
            Ok(v) => {
                *out = v.ln();
                RfgStatus::Ok
            }
            Err(e) => group_status(e),
        }
    })
}

/// `Σ_{k ≤ 2n} ln d(k)! - 2n ln 2`, the upper bound on the full growth at `n`.
///
/// # Safety
/// `ctx` is a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rfg_full_rf_upper(
    ctx: *const RfgContext,
    n: u64,
    out: *mut f64,
) -> RfgStatus {
    guarded(|| {
        let (Some(c), false) = (context(ctx), out.is_null()) else {
            return fail(RfgStatus::NullPointer, "null context or output");
        };
        if n == 0 {
            return fail(RfgStatus::InvalidArgument, "indices start at 1");
        }
        match growth::full_rf_upper(c, n) {
            Ok(v) => {
                *out = v.ln();
                RfgStatus::Ok
            }
            Err(e) => group_status(e),
        }
    })
}
