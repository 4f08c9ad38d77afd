use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use bgpmatch_ffi::*;

const DATA: &str = "\
<http://e/a> <http://e/knows> <http://e/b> .
<http://e/b> <http://e/knows> <http://e/c> .
<http://e/b> <http://e/name> \"Bee\"@en .
<http://e/a> <http://e/knows> <http://e/b> .
";

fn store() -> *mut BgpStore {
    let mut out = ptr::null_mut();
    let status = unsafe { bgp_store_from_ntriples(DATA.as_ptr(), DATA.len(), &mut out) };
    assert_eq!(status, BgpStatus::Ok);
    assert!(!out.is_null());
    out
}

fn query(store: *const BgpStore, text: &str, threads: usize) -> (BgpStatus, *mut BgpSolutions) {
    let text = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { bgp_store_query(store, text.as_ptr(), threads, &mut out) };
    (status, out)
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
    bgp_string_free(s);
    text
}

fn last_error() -> String {
    let p = bgp_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn counts() {
    let s = store();
    let (mut t, mut v, mut e) = (0, 0, 0);
    unsafe {
        assert_eq!(bgp_store_triple_count(s, &mut t), BgpStatus::Ok);
        assert_eq!(bgp_store_vertex_count(s, &mut v), BgpStatus::Ok);
        assert_eq!(bgp_store_edge_count(s, &mut e), BgpStatus::Ok);
        bgp_store_free(s);
    }
    assert_eq!((t, v, e), (4, 4, 3));
}

#[test]
fn cells_and_serializations() {
    let s = store();
    let (status, sol) = query(s, "SELECT ?y ?n WHERE { ?x <http://e/knows> ?y . ?y <http://e/name> ?n }", 1);
    assert_eq!(status, BgpStatus::Ok);
    unsafe {
        assert_eq!(bgp_solutions_row_count(sol), 1);
        assert_eq!(bgp_solutions_var_count(sol), 2);
        let mut out = ptr::null_mut();
        assert_eq!(bgp_solutions_var_name(sol, 1, &mut out), BgpStatus::Ok);
        assert_eq!(take(out), "n");
        assert_eq!(bgp_solutions_term(sol, 0, 0, &mut out), BgpStatus::Ok);
        assert_eq!(take(out), "<http://e/b>");
        assert_eq!(bgp_solutions_term(sol, 0, 1, &mut out), BgpStatus::Ok);
        assert_eq!(take(out), "\"Bee\"@en");
        assert_eq!(bgp_solutions_to_tsv(sol, &mut out), BgpStatus::Ok);
        assert_eq!(take(out), "?y\t?n\n<http://e/b>\t\"Bee\"@en\n");
        assert_eq!(bgp_solutions_to_json(sol, &mut out), BgpStatus::Ok);
        let json = take(out);
        assert!(json.contains("\"vars\""), "{json}");

        assert_eq!(bgp_solutions_term(sol, 1, 0, &mut out), BgpStatus::OutOfRange);
        assert!(last_error().contains("(1, 0)"));
        assert_eq!(bgp_solutions_var_name(sol, 2, &mut out), BgpStatus::OutOfRange);
        bgp_solutions_free(sol);
        bgp_store_free(s);
    }
}

#[test]
fn thread_counts_agree() {
    let s = store();
    let text = "SELECT * WHERE { ?x <http://e/knows> ?y . ?y ?p ?z }";
    let render = |threads| unsafe {
        let (status, sol) = query(s, text, threads);
        assert_eq!(status, BgpStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(bgp_solutions_to_tsv(sol, &mut out), BgpStatus::Ok);
        bgp_solutions_free(sol);
        take(out)
    };
    assert_eq!(render(0), render(1));
    assert_eq!(render(1), render(8));
    unsafe { bgp_store_free(s) };
}

#[test]
fn error_codes() {
    unsafe {
        let mut out = ptr::null_mut();
        let bad = "<http://e/a> <http://e/b> .\n";
        assert_eq!(bgp_store_from_ntriples(bad.as_ptr(), bad.len(), &mut out), BgpStatus::DataParseError);
        assert!(out.is_null());
        assert!(last_error().contains("1"), "{}", last_error());

        let invalid = [0xffu8, 0xfe];
        assert_eq!(bgp_store_from_ntriples(invalid.as_ptr(), 2, &mut out), BgpStatus::InvalidUtf8);
        assert_eq!(bgp_store_from_ntriples(ptr::null(), 3, &mut out), BgpStatus::NullArgument);
        assert_eq!(bgp_store_from_ntriples(ptr::null(), 0, &mut out), BgpStatus::Ok);
        bgp_store_free(out);

        let missing = CString::new("/nonexistent/data.nt").unwrap();
        assert_eq!(bgp_store_open(missing.as_ptr(), &mut out), BgpStatus::IoError);
        assert_eq!(bgp_store_open(ptr::null(), &mut out), BgpStatus::NullArgument);

        let s = store();
        let (status, sol) = query(s, "SELECT ?x WHERE { ?x <http://e/knows> }", 0);
        assert_eq!(status, BgpStatus::QueryParseError);
        assert!(sol.is_null());
        let (status, _) = query(s, "SELECT ?x WHERE { ?x <http://e/p> ?y . ?z <http://e/p> ?w }", 0);
        assert_eq!(status, BgpStatus::QueryParseError);
        assert_eq!(bgp_store_query(s, ptr::null(), 0, &mut ptr::null_mut()), BgpStatus::NullArgument);
        let mut n = 0;
        assert_eq!(bgp_store_triple_count(ptr::null(), &mut n), BgpStatus::NullArgument);
        assert_eq!(bgp_store_triple_count(s, ptr::null_mut()), BgpStatus::NullArgument);
        assert_eq!(bgp_solutions_row_count(ptr::null()), 0);
        bgp_store_free(s);
        bgp_store_free(ptr::null_mut());
        bgp_solutions_free(ptr::null_mut());
        bgp_string_free(ptr::null_mut());
    }
}

#[test]
fn open_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.nt");
    std::fs::write(&path, DATA).unwrap();
    let path = CString::new(path.to_str().unwrap()).unwrap();
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(bgp_store_open(path.as_ptr(), &mut s), BgpStatus::Ok);
        let mut n = 0;
        bgp_store_triple_count(s, &mut n);
        assert_eq!(n, 4);
        bgp_store_free(s);
    }
    assert_eq!(bgp_abi_version(), BGP_ABI_VERSION);
}

/// Compiles tests/c/smoke.c against the generated header and the shared
/// library. Skipped when no C compiler or no built library is around.
#[test]
fn c_program_links_against_header() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = root.join("include/bgpmatch.h");
    assert!(header.exists(), "header not generated");
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join(format!("{}bgpmatch_ffi{}", std::env::consts::DLL_PREFIX, std::env::consts::DLL_SUFFIX));
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no cc or no {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(root.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .arg(format!("-Wl,-rpath,{}", profile_dir.display()))
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "cc failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "smoke exited with {:?}", out.status.code());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "?x\t?z\n<http://e/a>\t<http://e/c>\n");
}
