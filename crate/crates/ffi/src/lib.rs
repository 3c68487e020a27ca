//! C ABI over the group transfer computations and the command-line runner.
//!
//! Every fallible call returns a [`ShtStatus`]. On failure the message is
//! kept per thread and read with [`sht_last_error`]. Handles are opaque and
//! each has a matching `_free`; strings returned to the caller are released
//! with [`sht_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use shadowtrace::group::{
    becker_gottlieb_composite, build_cover, cross_model_check, load_group_json, loop_transfer, parse_subgroup_spec,
    CoverSpec, GroupData, TransferMatrix,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    OutOfRange = 5,
    Panic = 6,
}

/// A finite group with its named subgroups.
pub struct ShtGroup(GroupData);

/// A finite cover of classifying spaces, given by a subgroup.
pub struct ShtCover(CoverSpec);

/// An integer conjugacy-class transfer matrix.
pub struct ShtTransfer(TransferMatrix);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn fail(status: ShtStatus, msg: impl Into<String>) -> ShtStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> ShtStatus) -> ShtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(ShtStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, ShtStatus> {
    if p.is_null() {
        return Err(fail(ShtStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(ShtStatus::InvalidUtf8, "argument is not UTF-8"))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! nonnull {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            return fail(ShtStatus::NullPointer, "null pointer argument");
        }
    };
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sht_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// The last error message on this thread, or NULL. The caller owns the
/// returned string.
#[no_mangle]
pub extern "C" fn sht_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |s| s.clone().into_raw()))
}

/// # Safety
/// `s` is NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sht_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads a group from its JSON description.
///
/// # Safety
/// `json` is a NUL-terminated string and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sht_group_from_json(json: *const c_char, out: *mut *mut ShtGroup) -> ShtStatus {
    guard(|| {
        nonnull!(out);
        let text = try_ffi!(read_str(json));
        let v: serde_json::Value = try_ffi!(serde_json::from_str(text).map_err(|e| fail(ShtStatus::Parse, e.to_string())));
        let g = try_ffi!(load_group_json(&v).map_err(|e| fail(ShtStatus::InvalidInput, e.to_string())));
        *out = Box::into_raw(Box::new(ShtGroup(g)));
        ShtStatus::Ok
    })
}

/// Order of the group; 0 for NULL.
///
/// # Safety
/// `g` is NULL or a live group handle.
#[no_mangle]
pub unsafe extern "C" fn sht_group_order(g: *const ShtGroup) -> usize {
    g.as_ref().map_or(0, |g| g.0.group.order())
}

/// # Safety
/// `g` is NULL or a group handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sht_group_free(g: *mut ShtGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// The cover of a subgroup given as `{0,2}`, `<(1 2 3)>` or a name.
///
/// # Safety
/// `g` is a live group handle, `subgroup` a NUL-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sht_cover_new(g: *const ShtGroup, subgroup: *const c_char, out: *mut *mut ShtCover) -> ShtStatus {
    guard(|| {
        nonnull!(g, out);
        let gd = &(*g).0;
        let spec = try_ffi!(read_str(subgroup));
        let spec = try_ffi!(parse_subgroup_spec(spec).map_err(|e| fail(ShtStatus::Parse, e.to_string())));
        let cover = gd
            .resolve(&spec)
            .and_then(|k| build_cover(gd.group.clone(), &k))
            .map_err(|e| fail(ShtStatus::InvalidInput, e.to_string()));
        *out = Box::into_raw(Box::new(ShtCover(try_ffi!(cover))));
        ShtStatus::Ok
    })
}

/// Number of sheets `[G:K]`; 0 for NULL.
///
/// # Safety
/// `c` is NULL or a live cover handle.
#[no_mangle]
pub unsafe extern "C" fn sht_cover_index(c: *const ShtCover) -> usize {
    c.as_ref().map_or(0, |c| c.0.index())
}

/// # Safety
/// `c` is NULL or a cover handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sht_cover_free(c: *mut ShtCover) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// The degree of transfer followed by projection on the trivial class.
///
/// # Safety
/// `c` is a live cover handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sht_becker_gottlieb(c: *const ShtCover, out: *mut i64) -> ShtStatus {
    guard(|| {
        nonnull!(c, out);
        *out = becker_gottlieb_composite(&(*c).0);
        ShtStatus::Ok
    })
}

/// Compares the bimodule trace of the restriction with the transfer.
///
/// # Safety
/// `c` is a live cover handle and `pass` writable.
#[no_mangle]
pub unsafe extern "C" fn sht_cross_model_check(c: *const ShtCover, pass: *mut bool) -> ShtStatus {
    guard(|| {
        nonnull!(c, pass);
        let r = try_ffi!(cross_model_check(&(*c).0).map_err(|e| fail(ShtStatus::InvalidInput, e.to_string())));
        *pass = r.pass;
        ShtStatus::Ok
    })
}

/// # Safety
/// `c` is a live cover handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sht_loop_transfer(c: *const ShtCover, out: *mut *mut ShtTransfer) -> ShtStatus {
    guard(|| {
        nonnull!(c, out);
        *out = Box::into_raw(Box::new(ShtTransfer(loop_transfer(&(*c).0))));
        ShtStatus::Ok
    })
}

/// Rows are classes of the subgroup; 0 for NULL.
///
/// # Safety
/// `t` is NULL or a live transfer handle.
#[no_mangle]
pub unsafe extern "C" fn sht_transfer_rows(t: *const ShtTransfer) -> usize {
    t.as_ref().map_or(0, |t| t.0.rows())
}

/// Columns are classes of the group; 0 for NULL.
///
/// # Safety
/// `t` is NULL or a live transfer handle.
#[no_mangle]
pub unsafe extern "C" fn sht_transfer_cols(t: *const ShtTransfer) -> usize {
    t.as_ref().map_or(0, |t| t.0.cols())
}

/// # Safety
/// `t` is a live transfer handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sht_transfer_entry(t: *const ShtTransfer, row: usize, col: usize, out: *mut i64) -> ShtStatus {
    guard(|| {
        nonnull!(t, out);
        let m = &(*t).0;
        if row >= m.rows() || col >= m.cols() {
            return fail(ShtStatus::OutOfRange, format!("entry ({row}, {col}) outside {}×{}", m.rows(), m.cols()));
        }
        *out = m.entries[row][col];
        ShtStatus::Ok
    })
}

/// The matrix as a JSON document with class labels and sizes.
///
/// # Safety
/// `t` is a live transfer handle and `out` writable; free the result with
/// [`sht_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sht_transfer_to_json(t: *const ShtTransfer, out: *mut *mut c_char) -> ShtStatus {
    guard(|| {
        nonnull!(t, out);
        let s = serde_json::to_string_pretty(&(*t).0.to_json()).expect("serializable") + "\n";
        *out = into_c_string(s);
        ShtStatus::Ok
    })
}

/// # Safety
/// `t` is NULL or a transfer handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sht_transfer_free(t: *mut ShtTransfer) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Runs the command-line front end on `argv` (without the program name).
/// Returns the exit code; either output pointer may be NULL to discard it.
///
/// # Safety
/// `argv` holds `argc` NUL-terminated strings; output pointers are NULL or
/// writable, and receive strings to free with [`sht_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sht_run(
    argc: usize,
    argv: *const *const c_char,
    out_stdout: *mut *mut c_char,
    out_stderr: *mut *mut c_char,
) -> i32 {
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        let mut args = vec!["shadowtrace".to_string()];
        if argc > 0 {
            if argv.is_null() {
                return Err(fail(ShtStatus::NullPointer, "null argv"));
            }
            for i in 0..argc {
                args.push(read_str(*argv.add(i))?.to_string());
            }
        }
        Ok(shadowtrace::cli::run(args))
    }));
    let outcome = match outcome {
        Ok(Ok(o)) => o,
        Ok(Err(_)) => return 2,
        Err(_) => {
            set_error("internal panic");
            return 2;
        }
    };
    if !out_stdout.is_null() {
        *out_stdout = into_c_string(outcome.stdout);
    }
    if !out_stderr.is_null() {
        *out_stderr = into_c_string(outcome.stderr);
    }
    outcome.code
}
