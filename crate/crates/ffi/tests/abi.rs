use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use shadowtrace_ffi::*;

const S3: &str = r#"{"perm_degree": 3, "generators": ["(1 2)", "(1 2 3)"], "subgroups": {"a3": {"generators": ["(1 2 3)"]}}}"#;

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    sht_string_free(s);
    out
}

unsafe fn group(json: &str) -> *mut ShtGroup {
    let text = CString::new(json).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(sht_group_from_json(text.as_ptr(), &mut g), ShtStatus::Ok);
    g
}

unsafe fn cover(g: *const ShtGroup, spec: &str) -> Result<*mut ShtCover, ShtStatus> {
    let spec = CString::new(spec).unwrap();
    let mut c = ptr::null_mut();
    match sht_cover_new(g, spec.as_ptr(), &mut c) {
        ShtStatus::Ok => Ok(c),
        s => Err(s),
    }
}

#[test]
fn s3_a3_transfer_through_handles() {
    unsafe {
        let g = group(S3);
        assert_eq!(sht_group_order(g), 6);
        let c = cover(g, "a3").unwrap();
        assert_eq!(sht_cover_index(c), 2);
        let mut t = ptr::null_mut();
        assert_eq!(sht_loop_transfer(c, &mut t), ShtStatus::Ok);
        assert_eq!((sht_transfer_rows(t), sht_transfer_cols(t)), (3, 3));
        let mut entries = vec![vec![0i64; 3]; 3];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                assert_eq!(sht_transfer_entry(t, i, j, x), ShtStatus::Ok);
            }
        }
        assert_eq!(entries, [[2, 0, 0], [0, 0, 1], [0, 0, 1]]);

        let mut json = ptr::null_mut();
        assert_eq!(sht_transfer_to_json(t, &mut json), ShtStatus::Ok);
        let golden = include_str!("../../core/tests/golden/s3_a3.json");
        assert_eq!(take(json), golden);

        let mut x = 0;
        assert_eq!(sht_transfer_entry(t, 3, 0, &mut x), ShtStatus::OutOfRange);
        assert!(take(sht_last_error()).contains("outside 3×3"));

        let mut bg = 0;
        assert_eq!(sht_becker_gottlieb(c, &mut bg), ShtStatus::Ok);
        assert_eq!(bg, 2);
        let mut pass = false;
        assert_eq!(sht_cross_model_check(c, &mut pass), ShtStatus::Ok);
        assert!(pass);

        sht_transfer_free(t);
        sht_cover_free(c);
        sht_group_free(g);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let bad = CString::new("{not json").unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(sht_group_from_json(bad.as_ptr(), &mut g), ShtStatus::Parse);
        assert!(g.is_null());

        let not_group = CString::new(r#"{"table": [[0, 1], [0, 1]]}"#).unwrap();
        assert_eq!(sht_group_from_json(not_group.as_ptr(), &mut g), ShtStatus::InvalidInput);
        assert!(!take(sht_last_error()).is_empty());

        assert_eq!(sht_group_from_json(ptr::null(), &mut g), ShtStatus::NullPointer);
        let utf = [0xffu8 as c_char, 0];
        assert_eq!(sht_group_from_json(utf.as_ptr(), &mut g), ShtStatus::InvalidUtf8);

        let g = group(S3);
        assert_eq!(cover(g, "{1, 2}").unwrap_err(), ShtStatus::InvalidInput);
        assert_eq!(cover(g, "nosuch").unwrap_err(), ShtStatus::InvalidInput);
        assert_eq!(cover(g, "{1, 2").unwrap_err(), ShtStatus::Parse);
        sht_group_free(g);

        assert_eq!(sht_group_order(ptr::null()), 0);
        sht_group_free(ptr::null_mut());
        sht_string_free(ptr::null_mut());
    }
}

#[test]
fn last_error_is_per_thread() {
    unsafe {
        let mut x = 0;
        assert_eq!(sht_becker_gottlieb(ptr::null(), &mut x), ShtStatus::NullPointer);
        let other = std::thread::spawn(|| sht_last_error().is_null()).join().unwrap();
        assert!(other);
        assert!(!sht_last_error().is_null());
    }
}

#[test]
fn run_matches_cli() {
    let args: Vec<CString> = ["corpus", "--format", "json"].iter().map(|s| CString::new(*s).unwrap()).collect();
    let ptrs: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
    unsafe {
        let (mut out, mut err) = (ptr::null_mut(), ptr::null_mut());
        let code = sht_run(ptrs.len(), ptrs.as_ptr(), &mut out, &mut err);
        assert_eq!(code, 0);
        let out = take(out);
        assert!(out.ends_with("}\n"));
        assert!(take(err).is_empty());
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["status"], "Pass");

        let bad = [c"frobnicate".as_ptr()];
        assert_eq!(sht_run(1, bad.as_ptr(), ptr::null_mut(), ptr::null_mut()), 2);
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(sht_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/shadowtrace.h");
    for f in [
        "sht_version",
        "sht_last_error",
        "sht_string_free",
        "sht_group_from_json",
        "sht_group_order",
        "sht_group_free",
        "sht_cover_new",
        "sht_cover_index",
        "sht_cover_free",
        "sht_becker_gottlieb",
        "sht_cross_model_check",
        "sht_loop_transfer",
        "sht_transfer_rows",
        "sht_transfer_cols",
        "sht_transfer_entry",
        "sht_transfer_to_json",
        "sht_transfer_free",
        "sht_run",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct ShtCover ShtCover;"));
    assert!(header.contains("SHT_STATUS_OUT_OF_RANGE = 5"));
}

const C_SMOKE: &str = r#"
#include <stdio.h>
#include <string.h>
#include "shadowtrace.h"

int main(void) {
    const char *json = "{\"order\": 4, \"table\": [[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]]}";
    ShtGroup *g = NULL;
    ShtCover *c = NULL;
    int64_t bg = 0;
    if (sht_group_from_json(json, &g) != SHT_STATUS_OK) return 10;
    if (sht_cover_new(g, "{0,2}", &c) != SHT_STATUS_OK) return 11;
    if (sht_becker_gottlieb(c, &bg) != SHT_STATUS_OK) return 12;
    if (sht_cover_new(g, "{1}", &c) != SHT_STATUS_INVALID_INPUT) return 13;
    char *err = sht_last_error();
    printf("bg=%lld index=%zu err=%d\n", (long long)bg, sht_cover_index(c), err != NULL);
    sht_string_free(err);
    sht_cover_free(c);
    sht_group_free(g);
    return 0;
}
"#;

#[test]
fn c_program_links_against_staticlib() {
    let target = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = target.join("libshadowtrace_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(&src, C_SMOKE).unwrap();
    let exe = dir.path().join("smoke");
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "bg=2 index=2 err=1\n");
}
