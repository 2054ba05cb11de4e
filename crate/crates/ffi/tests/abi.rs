use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use surface_semigroups_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    ss_string_free(p);
    s
}

fn last_error() -> String {
    let p = ss_last_error_message();
    assert!(!p.is_null(), "expected an error message");
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

unsafe fn classify_json(json: &str) -> (SsVerdict, SsModuliKind) {
    let mut d = ptr::null_mut();
    assert_eq!(ss_descriptor_parse(c(json).as_ptr(), &mut d), SsStatus::Ok);
    let mut r = ptr::null_mut();
    assert_eq!(ss_classify(d, &mut r), SsStatus::Ok);
    let mut v = SsVerdict::Conditional;
    let mut k = SsModuliKind::Unknown;
    assert_eq!(ss_report_verdict(r, &mut v), SsStatus::Ok);
    assert_eq!(ss_report_moduli_kind(r, &mut k), SsStatus::Ok);
    ss_report_free(r);
    ss_descriptor_free(d);
    (v, k)
}

#[test]
fn bielliptic_verdicts_through_handles() {
    for t in 1..=7 {
        let (v, k) = unsafe { classify_json(&format!(r#"{{"surface": {{"kind": "bielliptic", "type": {t}}}}}"#)) };
        if t % 2 == 1 {
            assert_eq!(v, SsVerdict::Yes, "type {t}");
            assert_eq!(k, SsModuliKind::IsolatedReducedPoints);
        } else {
            assert_eq!(v, SsVerdict::No, "type {t}");
            assert_eq!(k, SsModuliKind::Empty);
        }
    }
}

#[test]
fn enriques_is_no() {
    let (v, k) = unsafe { classify_json(r#"{"surface": {"kind": "enriques"}}"#) };
    assert_eq!(v, SsVerdict::No);
    assert_eq!(k, SsModuliKind::Empty);
}

#[test]
fn descriptor_round_trip_and_explain() {
    unsafe {
        let mut d = ptr::null_mut();
        let src = r#"{"surface": {"kind": "ruled", "g": 1, "e": -1}}"#;
        assert_eq!(ss_descriptor_parse(c(src).as_ptr(), &mut d), SsStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(ss_descriptor_to_json(d, &mut out), SsStatus::Ok);
        let json = take_string(out);

        let mut d2 = ptr::null_mut();
        assert_eq!(ss_descriptor_parse(c(&json).as_ptr(), &mut d2), SsStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(ss_descriptor_to_json(d2, &mut again), SsStatus::Ok);
        assert_eq!(take_string(again), json);

        let mut r = ptr::null_mut();
        assert_eq!(ss_classify(d, &mut r), SsStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(ss_report_explain(r, &mut text), SsStatus::Ok);
        assert!(take_string(text).starts_with("verdict: YES"));
        ss_report_free(r);
        ss_descriptor_free(d2);
        ss_descriptor_free(d);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut d = ptr::null_mut();
        assert_eq!(ss_descriptor_parse(c("{not json").as_ptr(), &mut d), SsStatus::ParseError);
        assert!(d.is_null());
        assert!(!last_error().is_empty());

        let bad = r#"{"surface": {"kind": "ruled", "g": 1, "e": -2}}"#;
        assert_eq!(ss_descriptor_parse(c(bad).as_ptr(), &mut d), SsStatus::SchemaError);
        assert!(last_error().contains("surface.e"), "{}", last_error());

        assert_eq!(ss_descriptor_parse(ptr::null(), &mut d), SsStatus::NullPointer);
        let ok = c(r#"{"surface": {"kind": "abelian"}}"#);
        assert_eq!(ss_descriptor_parse(ok.as_ptr(), ptr::null_mut()), SsStatus::NullPointer);

        let invalid_utf8 = [0xffu8, 0xfe, 0];
        assert_eq!(ss_descriptor_parse(invalid_utf8.as_ptr().cast(), &mut d), SsStatus::InvalidUtf8);

        let mut r = ptr::null_mut();
        assert_eq!(ss_classify(ptr::null(), &mut r), SsStatus::NullPointer);

        // a successful call clears the message
        assert_eq!(ss_descriptor_parse(ok.as_ptr(), &mut d), SsStatus::Ok);
        assert!(ss_last_error_message().is_null());
        ss_descriptor_free(d);

        ss_descriptor_free(ptr::null_mut());
        ss_report_free(ptr::null_mut());
        ss_string_free(ptr::null_mut());
    }
}

#[test]
fn run_matches_cli_exit_codes() {
    unsafe {
        let mut out = ptr::null_mut();
        let mut code = -1;
        let doc = c(r#"{"surface": {"kind": "abelian"}}"#);
        assert_eq!(ss_run(SsSubcommand::VerifyLaw, doc.as_ptr(), 3, &mut out, &mut code), SsStatus::Ok);
        assert_eq!(code, 0);
        let json = take_string(out);
        assert!(json.contains("\"verification\""));
        assert!(json.contains("\"triples\": 729"));

        let bad = c(r#"{"surface": {"kind": "bielliptic", "type": 9}}"#);
        assert_eq!(ss_run(SsSubcommand::Classify, bad.as_ptr(), 4, &mut out, &mut code), SsStatus::Ok);
        assert_eq!(code, 1);
        assert!(take_string(out).contains("SCHEMA_ERROR"));
    }
}

#[test]
fn numeric_helpers() {
    unsafe {
        let mut n = 0i64;
        // C₀² = −e, C₀·f = 1, f² = 0
        assert_eq!(ss_ruled_intersect(2, 3, 1, 0, 1, 0, &mut n), SsStatus::Ok);
        assert_eq!(n, -3);
        assert_eq!(ss_ruled_intersect(2, 3, 1, 0, 0, 1, &mut n), SsStatus::Ok);
        assert_eq!(n, 1);
        assert_eq!(ss_ruled_intersect(1, -2, 1, 0, 1, 0, &mut n), SsStatus::InvalidArgument);

        let mut ample = false;
        assert_eq!(ss_ruled_is_ample(0, 1, 1, 2, &mut ample), SsStatus::Ok);
        assert!(ample);
        assert_eq!(ss_ruled_is_ample(0, 1, 1, 1, &mut ample), SsStatus::Ok);
        assert!(!ample);

        assert_eq!(ss_ext1_dim(-2, -2), 3);
        assert_eq!(ss_ext1_dim(0, 0), 0);

        assert_eq!(ss_fixed_point_count(0, 1, SsField::Gaussian, &mut n), SsStatus::Ok);
        assert_eq!(n, 2);
        assert_eq!(ss_fixed_point_count(0, 1, SsField::Eisenstein, &mut n), SsStatus::Ok);
        assert_eq!(n, 3);
        assert_eq!(ss_fixed_point_count(-1, 0, SsField::Generic, &mut n), SsStatus::Ok);
        assert_eq!(n, 4);
        assert_eq!(ss_fixed_point_count(0, 1, SsField::Generic, &mut n), SsStatus::InvalidArgument);

        let (mut num, mut den) = (0i64, 0i64);
        let ms = [2u32, 3];
        assert_eq!(ss_delta_invariant(0, 1, ms.as_ptr(), ms.len(), &mut num, &mut den), SsStatus::Ok);
        assert_eq!((num, den), (1, 6));
        assert_eq!(ss_delta_invariant(1, 0, ptr::null(), 0, &mut num, &mut den), SsStatus::Ok);
        assert_eq!((num, den), (0, 1));
        assert_eq!(ss_delta_invariant(0, 1, ptr::null(), 2, &mut num, &mut den), SsStatus::NullPointer);
    }
}

fn profile_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|p| p.parent()).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    assert!(header_dir.join("surface_semigroups.h").exists(), "header not generated");

    let lib = profile_dir().join("libsurface_semigroups_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());

    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ffi_smoke");
    let status = Command::new(std::env::var("CC").unwrap_or_else(|_| "cc".into()))
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&header_dir)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("C compiler available");
    assert!(status.success(), "C smoke program failed to build");

    let run = Command::new(&out).output().unwrap();
    assert!(
        run.status.success(),
        "C smoke program failed:\n{}{}",
        String::from_utf8_lossy(&run.stdout),
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
