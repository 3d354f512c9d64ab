use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use ternstem_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    ts_string_free(s);
    out
}

#[test]
fn construct_and_inspect() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(ts_morphism_construct(13, &mut m), TsStatus::Ok);
        assert_eq!(ts_morphism_length(m), 13);
        let mut s = ptr::null_mut();
        assert_eq!(ts_morphism_image(m, 0, &mut s), TsStatus::Ok);
        assert_eq!(take(s), "2101201021012");
        assert_eq!(ts_morphism_image(m, 1, &mut s), TsStatus::Ok);
        assert_eq!(take(s), "0212012102120");
        let mut verdict = false;
        assert_eq!(ts_morphism_berstel(m, &mut verdict), TsStatus::Ok);
        assert!(verdict);
        let w = CString::new("01").unwrap();
        assert_eq!(ts_morphism_apply(m, w.as_ptr(), &mut s), TsStatus::Ok);
        assert_eq!(take(s), "21012010210120212012102120");
        assert_eq!(ts_morphism_image(m, 3, &mut s), TsStatus::InvalidArgument);
        ts_morphism_free(m);
    }
}

#[test]
fn exceptions_and_errors() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(ts_morphism_construct(14, &mut m), TsStatus::Nonexistent);
        assert!(m.is_null());
        let msg = CStr::from_ptr(ts_last_error()).to_str().unwrap();
        assert!(msg.contains("14"), "{msg}");
        assert_eq!(
            ts_morphism_construct(5, ptr::null_mut()),
            TsStatus::NullPointer
        );
        let bad = CString::new("0130").unwrap();
        assert_eq!(
            ts_morphism_from_seed(bad.as_ptr(), &mut m),
            TsStatus::InvalidArgument
        );
        assert_eq!(
            ts_morphism_berstel(ptr::null(), ptr::null_mut()),
            TsStatus::NullPointer
        );
        ts_morphism_free(ptr::null_mut());
        ts_string_free(ptr::null_mut());
    }
}

#[test]
fn seed_with_square_fails_berstel() {
    unsafe {
        let seed = CString::new("012").unwrap();
        let mut m = ptr::null_mut();
        assert_eq!(ts_morphism_from_seed(seed.as_ptr(), &mut m), TsStatus::Ok);
        let mut verdict = true;
        assert_eq!(ts_morphism_berstel(m, &mut verdict), TsStatus::Ok);
        assert!(!verdict);
        ts_morphism_free(m);
    }
}

#[test]
fn checker_round_trip() {
    unsafe {
        let c = ts_checker_new();
        let mut ok = false;
        for a in [0u8, 1, 0] {
            assert_eq!(ts_checker_push(c, a, &mut ok), TsStatus::Ok);
            assert!(ok);
        }
        assert_eq!(ts_checker_push(c, 1, &mut ok), TsStatus::Ok);
        assert!(!ok);
        assert_eq!(ts_checker_len(c), 3);
        let mut last = 9;
        assert_eq!(ts_checker_pop(c, &mut last), TsStatus::Ok);
        assert_eq!(last, 0);
        assert_eq!(ts_checker_push(c, 7, &mut ok), TsStatus::InvalidArgument);
        ts_checker_pop(c, &mut last);
        ts_checker_pop(c, &mut last);
        assert_eq!(ts_checker_pop(c, &mut last), TsStatus::InvalidArgument);
        assert_eq!(ts_checker_len(ptr::null()), 0);
        ts_checker_free(c);
    }
}

#[test]
fn search_and_make_x() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(ts_search_json(14, true, 0, &mut s), TsStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["solutions"].as_array().unwrap().len(), 0);
        assert_eq!(v["exhaustive"], true);

        assert_eq!(ts_make_x(6, &mut s), TsStatus::Ok);
        assert_eq!(take(s).len(), 23);
        assert_eq!(ts_make_x(5, &mut s), TsStatus::InvalidArgument);

        let w = CString::new("0121").unwrap();
        let mut sf = true;
        assert_eq!(ts_is_square_free(w.as_ptr(), &mut sf), TsStatus::Ok);
        assert!(sf);
        let v = CStr::from_ptr(ts_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn header_declares_api() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ternstem.h"))
            .unwrap();
    for needle in [
        "#ifndef TERNSTEM_H",
        "typedef struct TsMorphism TsMorphism;",
        "typedef struct TsChecker TsChecker;",
        "TS_STATUS_NONEXISTENT = 3",
        "TsStatus ts_morphism_construct(size_t n, TsMorphism **out);",
        "void ts_string_free(char *s);",
        "const char *ts_last_error(void);",
        "TsStatus ts_checker_push(TsChecker *c, uint8_t letter, bool *accepted);",
    ] {
        assert!(header.contains(needle), "missing {needle:?}");
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/ternstem.h");
    let Ok(status) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header])
        .status()
    else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(status.success());
}
