use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use crepant_lab_ffi::*;

fn parse(s: &str) -> *mut ClType {
    let c = CString::new(s).unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { cl_type_parse(c.as_ptr(), &mut t) }, ClStatus::Ok);
    t
}

fn last_error() -> String {
    let p = cl_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn type_accessors() {
    let t = parse("1/12(1,2,3,6)");
    let (mut l, mut r, mut g) = (0u64, 0usize, false);
    unsafe {
        assert_eq!(cl_type_order(t, &mut l), ClStatus::Ok);
        assert_eq!(cl_type_dim(t, &mut r), ClStatus::Ok);
        assert_eq!(cl_type_is_gorenstein(t, &mut g), ClStatus::Ok);
        cl_type_free(t);
    }
    assert_eq!((l, r, g), (12, 4, true));
}

#[test]
fn ehrhart_strings() {
    let t = parse("1/12(1,2,3,6)");
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(cl_ehrhart_eval(t, 1, &mut s), ClStatus::Ok);
        assert_eq!(CStr::from_ptr(s).to_str().unwrap(), "9");
        cl_string_free(s);
        cl_type_free(t);
    }
}

#[test]
fn parse_errors() {
    let c = CString::new("1/0(1,2)").unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { cl_type_parse(c.as_ptr(), &mut t) }, ClStatus::Parse);
    assert!(t.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { cl_type_parse(ptr::null(), &mut t) }, ClStatus::NullPointer);
    let bad = [0xffu8, 0];
    assert_eq!(unsafe { cl_type_parse(bad.as_ptr().cast(), &mut t) }, ClStatus::InvalidUtf8);
}

#[test]
fn non_gorenstein() {
    let t = parse("1/5(1,1,1,1)");
    let mut rep = ptr::null_mut();
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(cl_pipeline_run(t, 0, &mut rep), ClStatus::NotGorenstein);
        assert!(rep.is_null());
        assert_eq!(cl_ehrhart_eval(t, 2, &mut s), ClStatus::NotGorenstein);
        assert!(last_error().contains("Gorenstein"));
        cl_type_free(t);
    }
}

#[test]
fn pipeline_report() {
    for (ty, verdict, step) in [
        ("1/12(2,2,3,5)", ClVerdict::NotResolvable, 3),
        ("1/12(1,2,3,6)", ClVerdict::Resolvable, 5),
        ("1/3(1,1,1)", ClVerdict::Resolvable, 0),
    ] {
        let t = parse(ty);
        let mut rep = ptr::null_mut();
        let (mut v, mut d) = (ClVerdict::Undecided, 99u8);
        let mut js = ptr::null_mut();
        unsafe {
            assert_eq!(cl_pipeline_run(t, 0, &mut rep), ClStatus::Ok);
            assert_eq!(cl_report_verdict(rep, &mut v, &mut d), ClStatus::Ok);
            assert_eq!(cl_report_json(rep, &mut js), ClStatus::Ok);
            let json: serde_json::Value = serde_json::from_str(CStr::from_ptr(js).to_str().unwrap()).unwrap();
            assert_eq!(json["schema_version"], 1);
            cl_string_free(js);
            cl_report_free(rep);
            cl_type_free(t);
        }
        assert_eq!((v, d), (verdict, step), "{ty}");
    }
}

#[test]
fn null_frees_are_noops() {
    unsafe {
        cl_type_free(ptr::null_mut());
        cl_report_free(ptr::null_mut());
        cl_string_free(ptr::null_mut());
    }
}

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/crepant_lab.h");
    assert!(header.exists());
    let text = std::fs::read_to_string(&header).unwrap();
    for f in ["cl_type_parse", "cl_pipeline_run", "cl_report_json", "cl_last_error_message", "CL_STATUS_PANIC = 7"] {
        assert!(text.contains(f), "{f}");
    }
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler, skipping");
        return;
    }
    let tmp = std::env::temp_dir().join(format!("crepant_lab_capi_{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    let src = tmp.join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include <string.h>
#include "crepant_lab.h"
int main(void) {
    ClType *t = NULL;
    if (cl_type_parse("1/12(2,2,3,5)", &t) != CL_STATUS_OK) return 1;
    ClReport *r = NULL;
    if (cl_pipeline_run(t, 0, &r) != CL_STATUS_OK) return 2;
    ClVerdict v; uint8_t step;
    cl_report_verdict(r, &v, &step);
    char *js = NULL;
    cl_report_json(r, &js);
    int ok = v == CL_VERDICT_NOT_RESOLVABLE && step == 3 && strstr(js, "NOT_RESOLVABLE") != NULL;
    cl_string_free(js);
    cl_report_free(r);
    cl_type_free(t);
    if (cl_type_parse("garbage", &t) != CL_STATUS_PARSE || cl_last_error_message() == NULL) return 3;
    return ok ? 0 : 4;
}
"#,
    )
    .unwrap();
    let syntax = Command::new("cc")
        .args(["-std=c99", "-Wall", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(&src)
        .status()
        .unwrap();
    assert!(syntax.success());
    let lib = target_dir().join("libcrepant_lab_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built, skipping link step", lib.display());
        return;
    }
    let bin = tmp.join("capi");
    let built = Command::new("cc")
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(built.success());
    let status = Command::new(&bin).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let _ = std::fs::remove_dir_all(&tmp);
}
