use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use cutcactus::fixtures::Fixture;
use cutcactus_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { cc_string_free(s) };
    text
}

fn analyze(f: Fixture, mode: &str, k: i32) -> (CcStatus, *mut CcAnalysis) {
    let g = c(f.json());
    let m = c(mode);
    let mut h = ptr::null_mut();
    let status = unsafe { cc_analyze(g.as_ptr(), m.as_ptr(), k, &mut h) };
    (status, h)
}

#[test]
fn f2_round_trip() {
    let (status, h) = analyze(Fixture::F2, "ends", 0);
    assert_eq!(status, CcStatus::Ok);
    let mut n = 0usize;
    unsafe {
        assert_eq!(cc_analysis_class_count(h, &mut n), CcStatus::Ok);
        assert_eq!(n, 6);
        assert_eq!(cc_analysis_vertex_count(h, &mut n), CcStatus::Ok);
        assert_eq!(n, 4);
        for t in 0..4 {
            assert_eq!(cc_analysis_terminal_vertex(h, t, &mut n), CcStatus::Ok);
            assert_eq!(n, t);
        }
        assert_eq!(cc_analysis_terminal_vertex(h, 4, &mut n), CcStatus::OutOfRange);
        let (mut a, mut b) = (0usize, 0usize);
        assert_eq!(cc_analysis_cut_edges(h, 0, &mut a, &mut b), CcStatus::Ok);
        assert_ne!(a, b);
        assert_eq!(cc_analysis_cut_edges(h, 6, &mut a, &mut b), CcStatus::OutOfRange);

        let mut s = ptr::null_mut();
        assert_eq!(cc_analysis_to_json(h, &mut s), CcStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(doc["cactus"]["cycles"][0].as_array().unwrap().len(), 4);
        assert_eq!(cc_analysis_to_dot(h, &mut s), CcStatus::Ok);
        assert!(take(s).starts_with("graph cactus {"));
        cc_analysis_free(h);
    }
}

#[test]
fn error_codes() {
    let (status, h) = analyze(Fixture::F6, "thin", 0);
    assert_eq!(status, CcStatus::InvalidArgument);
    assert!(h.is_null());
    assert_eq!(analyze(Fixture::F2, "bogus", 0).0, CcStatus::InvalidArgument);
    assert_eq!(analyze(Fixture::K4, "thin", 2).0, CcStatus::ThresholdAbsent);

    let bad = c("{\"vertices\": 3}");
    let m = c("ends");
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { cc_analyze(bad.as_ptr(), m.as_ptr(), 0, &mut h) }, CcStatus::InvalidGraph);
    assert_eq!(unsafe { cc_analyze(ptr::null(), m.as_ptr(), 0, &mut h) }, CcStatus::NullPointer);
    assert_eq!(unsafe { cc_analyze(bad.as_ptr(), m.as_ptr(), 0, ptr::null_mut()) }, CcStatus::NullPointer);
    let invalid = [0xffu8, 0];
    assert_eq!(unsafe { cc_analyze(invalid.as_ptr().cast(), m.as_ptr(), 0, &mut h) }, CcStatus::InvalidUtf8);

    let mut n = 0usize;
    assert_eq!(unsafe { cc_analysis_class_count(ptr::null(), &mut n) }, CcStatus::NullPointer);
    unsafe {
        cc_analysis_free(ptr::null_mut());
        cc_string_free(ptr::null_mut());
    }
    let msg = unsafe { CStr::from_ptr(cc_status_message(CcStatus::ThresholdAbsent)) };
    assert_eq!(msg.to_str().unwrap(), "threshold is infinite");
}

#[test]
fn generalized_modes() {
    let (status, h) = analyze(Fixture::F6, "thin", 2);
    assert_eq!(status, CcStatus::Ok);
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(cc_analysis_to_json(h, &mut s), CcStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert!(doc.get("blocks").is_some());
        cc_analysis_free(h);
    }
}

#[test]
fn verify_writes_a_passing_report() {
    let g = c(Fixture::F4.json());
    let m = c("ends");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { cc_verify(g.as_ptr(), m.as_ptr(), 0, &mut s) }, CcStatus::Ok);
    let report: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["failures"].as_array().unwrap().is_empty()));
}

#[test]
fn header_declares_the_api_and_compiles() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let header = std::fs::read_to_string(format!("{dir}/include/cutcactus.h")).unwrap();
    for name in [
        "cc_analyze",
        "cc_analysis_free",
        "cc_string_free",
        "cc_analysis_to_json",
        "cc_analysis_to_dot",
        "cc_analysis_class_count",
        "cc_analysis_vertex_count",
        "cc_analysis_terminal_vertex",
        "cc_analysis_cut_edges",
        "cc_verify",
        "cc_status_message",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct CcAnalysis CcAnalysis;"));

    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("probe.c");
    std::fs::write(&src, "#include \"cutcactus.h\"\nint main(void) { CcAnalysis *h = 0; return cc_analysis_vertex_count(h, 0) == CC_STATUS_NULL_POINTER ? 0 : 1; }\n").unwrap();
    let out = Command::new("cc").arg("-fsyntax-only").arg("-Wall").arg("-Werror").arg(format!("-I{dir}/include")).arg(&src).output();
    match out {
        Ok(out) => assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr)),
        Err(e) => eprintln!("skipping C compile check: {e}"),
    }
}
