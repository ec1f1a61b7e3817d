use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use orbindex_ffi::*;

fn fixtures() -> CString {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures");
    CString::new(p.to_str().unwrap()).unwrap()
}

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    orb_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let e = orb_last_error();
    assert!(!e.is_null());
    CStr::from_ptr(e).to_string_lossy().into_owned()
}

fn load() -> *mut OrbWorkspace {
    let mut ws = ptr::null_mut();
    assert_eq!(
        unsafe { orb_workspace_load(fixtures().as_ptr(), &mut ws) },
        OrbStatus::Ok
    );
    ws
}

#[test]
fn integrals_round_trip_as_strings() {
    let ws = load();
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(
            orb_euler_integral(ws, c("interval_open").as_ptr(), &mut s),
            OrbStatus::Ok
        );
        assert_eq!(take(s), "-1");
        assert_eq!(
            orb_morse_evaluate(ws, c("triangle_one").as_ptr(), 3, &mut s),
            OrbStatus::Ok
        );
        assert_eq!(take(s), "1");
        assert_eq!(
            orb_orbifold_integral(ws, c("path_one").as_ptr(), c("swap").as_ptr(), &mut s),
            OrbStatus::Ok
        );
        assert_eq!(take(s), "1");
        assert_eq!(
            orb_coarse_weighted_integral(ws, c("path_one").as_ptr(), c("swap").as_ptr(), &mut s),
            OrbStatus::Ok
        );
        assert_eq!(take(s), "1");
        orb_workspace_free(ws);
    }
}

#[test]
fn tables_invert_and_serialize() {
    let ws = load();
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(
            orb_cc(ws, c("triangle_one").as_ptr(), c("triangle_chart").as_ptr(), &mut t),
            OrbStatus::Ok
        );
        let mut n = 0usize;
        assert_eq!(orb_table_len(t, &mut n), OrbStatus::Ok);
        assert_eq!(n, 7);
        let mut s = ptr::null_mut();
        assert_eq!(orb_table_to_json(t, &mut s), OrbStatus::Ok);
        let stored = std::fs::read_to_string(
            Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/triangle_one_cc.json"),
        )
        .unwrap();
        assert_eq!(take(s), stored);
        assert_eq!(orb_table_inverse(t, &mut s), OrbStatus::Ok);
        let inverse = take(s);
        let original =
            std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/triangle_one.json"))
                .unwrap();
        assert_eq!(inverse, original);
        orb_table_free(t);

        assert_eq!(orb_table_get(ws, c("triangle_one_cc").as_ptr(), &mut t), OrbStatus::Ok);
        assert_eq!(orb_table_intersect(t, &mut s), OrbStatus::Ok);
        assert_eq!(take(s), "1");
        orb_table_free(t);
        orb_workspace_free(ws);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let mut ws = ptr::null_mut();
        assert_eq!(orb_workspace_load(ptr::null(), &mut ws), OrbStatus::NullArgument);
        assert!(last_error().contains("path"));

        let names = [c("K")];
        let texts = [c(r#"{"vertices":[0,1],"simplices":[[0,1,2]]}"#)];
        let np: Vec<*const c_char> = names.iter().map(|x| x.as_ptr()).collect();
        let tp: Vec<*const c_char> = texts.iter().map(|x| x.as_ptr()).collect();
        assert_eq!(
            orb_workspace_from_sources(np.as_ptr(), tp.as_ptr(), 1, &mut ws),
            OrbStatus::Invalid
        );
        assert!(last_error().contains("[2]"));

        let texts = [c(r#"{"vertices":[0,1],"#)];
        let tp: Vec<*const c_char> = texts.iter().map(|x| x.as_ptr()).collect();
        assert_eq!(
            orb_workspace_from_sources(np.as_ptr(), tp.as_ptr(), 1, &mut ws),
            OrbStatus::Parse
        );

        let ws = load();
        let mut s = ptr::null_mut();
        assert_eq!(
            orb_euler_integral(ws, c("missing").as_ptr(), &mut s),
            OrbStatus::NotFound
        );
        assert!(last_error().contains("missing"));
        assert_eq!(
            orb_euler_integral(ws, c("interval_one").as_ptr(), ptr::null_mut()),
            OrbStatus::NullArgument
        );
        assert_eq!(
            orb_euler_integral(ws, c("interval_one").as_ptr(), &mut s),
            OrbStatus::Ok
        );
        assert!(orb_last_error().is_null());
        orb_string_free(s);
        orb_workspace_free(ws);
    }
}

#[test]
fn cli_runs_in_process() {
    let args = [
        c("--workspace"),
        fixtures(),
        c("integrate"),
        c("interval"),
        c("interval_one"),
    ];
    let argv: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
    unsafe {
        let (mut out, mut err, mut code) = (ptr::null_mut(), ptr::null_mut(), -1);
        assert_eq!(
            orb_cli_run(argv.as_ptr(), argv.len(), &mut out, &mut err, &mut code),
            OrbStatus::Ok
        );
        assert_eq!(code, 0);
        assert_eq!(take(out), "1\n");
        assert_eq!(take(err), "");
        let bad = [c("nonsense")];
        let argv: Vec<*const c_char> = bad.iter().map(|a| a.as_ptr()).collect();
        assert_eq!(
            orb_cli_run(argv.as_ptr(), 1, ptr::null_mut(), ptr::null_mut(), &mut code),
            OrbStatus::Ok
        );
        assert_eq!(code, 2);
    }
}

/// Build directory holding `liborbindex_ffi.a`: two levels above this test binary.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(manifest.join("include/orbindex.h")).unwrap();
    for f in [
        "orb_workspace_load",
        "orb_cc",
        "orb_table_inverse",
        "orb_cli_run",
        "ORB_STATUS_NOT_FOUND",
    ] {
        assert!(header.contains(f), "{f} missing from header");
    }
    let lib = artifact_dir().join("liborbindex_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&exe).arg(fixtures().to_str().unwrap()).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
