//! Exercises the C ABI exactly as a foreign caller would: raw pointers,
//! status codes, and owned strings released through the API.

use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use sysrep_ffi::{
    sysrep_analyze_json, sysrep_decompose_json, sysrep_document_schema, sysrep_factors_json,
    sysrep_last_error_message, sysrep_orbits_json, sysrep_simulate_json, sysrep_string_free,
    sysrep_system_free, sysrep_system_parse_json, sysrep_verify_json, sysrep_version,
    SysrepOptions, SysrepStatus, SysrepSystem,
};

const FIB_DOC: &str = r#"{"field": {"kind": "prime", "p": 2}, "matrix": [[1, 1], [1, 0]]}"#;

fn parse(doc: &str) -> *mut SysrepSystem {
    let c = CString::new(doc).unwrap();
    let mut sys: *mut SysrepSystem = ptr::null_mut();
    let status = unsafe { sysrep_system_parse_json(c.as_ptr(), &mut sys) };
    assert_eq!(status, SysrepStatus::Ok, "parse failed: {}", last_error());
    assert!(!sys.is_null());
    sys
}

fn last_error() -> String {
    let ptr = sysrep_last_error_message();
    if ptr.is_null() {
        return String::new();
    }
    unsafe { CStr::from_ptr(ptr) }.to_string_lossy().into_owned()
}

fn take_string(raw: *mut c_char) -> String {
    assert!(!raw.is_null());
    let s = unsafe { CStr::from_ptr(raw) }.to_string_lossy().into_owned();
    unsafe { sysrep_string_free(raw) };
    s
}

#[test]
fn analyze_roundtrip() {
    let sys = parse(FIB_DOC);
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { sysrep_analyze_json(sys, ptr::null(), &mut out) };
    assert_eq!(status, SysrepStatus::Ok, "{}", last_error());
    let json = take_string(out);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["minimal_polynomial"], serde_json::json!([1, 1, 1]));
    assert_eq!(v["period"]["T"], serde_json::json!(3));
    unsafe { sysrep_system_free(sys) };
}

#[test]
fn all_report_entry_points_produce_json() {
    let sys = parse(FIB_DOC);
    type Entry = unsafe extern "C" fn(
        *const SysrepSystem,
        *const SysrepOptions,
        *mut *mut c_char,
    ) -> SysrepStatus;
    let entries: [(Entry, &str); 4] = [
        (sysrep_analyze_json, "minimal_polynomial"),
        (sysrep_factors_json, "factorization"),
        (sysrep_decompose_json, "invariant_factors"),
        (sysrep_orbits_json, "census"),
    ];
    for (entry, key) in entries {
        let mut out: *mut c_char = ptr::null_mut();
        let status = unsafe { entry(sys, ptr::null(), &mut out) };
        assert_eq!(status, SysrepStatus::Ok, "{}", last_error());
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert!(v.get(key).is_some(), "missing {key}");
    }
    unsafe { sysrep_system_free(sys) };
}

#[test]
fn options_override_seed_and_trials() {
    let sys = parse(FIB_DOC);
    let opts = SysrepOptions {
        trials: 16,
        max_states: 0,
        workers: 2,
        has_seed_override: 1,
        seed: 42,
    };
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { sysrep_analyze_json(sys, &opts, &mut out) };
    assert_eq!(status, SysrepStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["seed"], serde_json::json!(42));
    assert_eq!(v["homomorphism_check"]["trials"], serde_json::json!(16));
    unsafe { sysrep_system_free(sys) };
}

#[test]
fn simulate_through_the_abi() {
    let sys = parse(FIB_DOC);
    let x0 = CString::new("1,0").unwrap();
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { sysrep_simulate_json(sys, x0.as_ptr(), 3, &mut out) };
    assert_eq!(status, SysrepStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    let rows = v["trajectory"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["state"], rows[3]["state"]);
    // malformed state vector
    let bad = CString::new("1,0,0").unwrap();
    let mut out2: *mut c_char = ptr::null_mut();
    let status = unsafe { sysrep_simulate_json(sys, bad.as_ptr(), 3, &mut out2) };
    assert_eq!(status, SysrepStatus::InvalidInput);
    assert!(out2.is_null());
    assert!(last_error().contains("length"));
    unsafe { sysrep_system_free(sys) };
}

#[test]
fn verify_reports_pass() {
    let sys = parse(FIB_DOC);
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { sysrep_verify_json(sys, ptr::null(), &mut out) };
    assert_eq!(status, SysrepStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["pass"], serde_json::json!(true));
    unsafe { sysrep_system_free(sys) };
}

#[test]
fn error_paths_set_messages_and_statuses() {
    // null pointers
    let mut sys: *mut SysrepSystem = ptr::null_mut();
    assert_eq!(
        unsafe { sysrep_system_parse_json(ptr::null(), &mut sys) },
        SysrepStatus::InvalidInput
    );
    assert!(!last_error().is_empty());

    // malformed JSON
    let bad = CString::new("{ nope").unwrap();
    assert_eq!(
        unsafe { sysrep_system_parse_json(bad.as_ptr(), &mut sys) },
        SysrepStatus::InvalidInput
    );
    assert!(last_error().contains("JSON"));

    // math precondition: singular generator on integer time
    let singular =
        CString::new(r#"{"field": {"kind": "prime", "p": 2}, "matrix": [[1,1],[1,1]]}"#).unwrap();
    let mut handle: *mut SysrepSystem = ptr::null_mut();
    assert_eq!(
        unsafe { sysrep_system_parse_json(singular.as_ptr(), &mut handle) },
        SysrepStatus::Ok,
        "documents parse structurally; group compatibility is checked per call"
    );
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { sysrep_analyze_json(handle, ptr::null(), &mut out) },
        SysrepStatus::Precondition
    );
    assert!(last_error().contains("singular"));
    unsafe { sysrep_system_free(handle) };

    // guard: degree-17 rational factorization
    let mut matrix = vec![vec![0i64; 17]; 17];
    for i in 1..17 {
        matrix[i][i - 1] = 1;
    }
    matrix[0][16] = 1;
    let doc = serde_json::json!({"field": {"kind": "rational"}, "matrix": matrix}).to_string();
    let big = CString::new(doc).unwrap();
    let mut handle: *mut SysrepSystem = ptr::null_mut();
    assert_eq!(
        unsafe { sysrep_system_parse_json(big.as_ptr(), &mut handle) },
        SysrepStatus::Ok
    );
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { sysrep_factors_json(handle, ptr::null(), &mut out) },
        SysrepStatus::GuardExceeded
    );
    unsafe { sysrep_system_free(handle) };

    // freeing NULL is a no-op
    unsafe {
        sysrep_system_free(ptr::null_mut());
        sysrep_string_free(ptr::null_mut());
    }
}

#[test]
fn static_strings_are_exposed() {
    let version = unsafe { CStr::from_ptr(sysrep_version()) };
    assert!(!version.to_str().unwrap().is_empty());
    let schema = unsafe { CStr::from_ptr(sysrep_document_schema()) };
    let v: serde_json::Value = serde_json::from_str(schema.to_str().unwrap()).unwrap();
    assert_eq!(v["title"], "SystemDocument");
}

#[test]
fn generated_header_covers_the_surface() {
    let header_path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("include")
        .join("sysrep.h");
    let header = std::fs::read_to_string(header_path).expect("header generated by build.rs");
    for symbol in [
        "sysrep_system_parse_json",
        "sysrep_system_free",
        "sysrep_string_free",
        "sysrep_analyze_json",
        "sysrep_factors_json",
        "sysrep_decompose_json",
        "sysrep_orbits_json",
        "sysrep_simulate_json",
        "sysrep_verify_json",
        "sysrep_last_error_message",
        "sysrep_version",
        "sysrep_document_schema",
        "SYSREP_STATUS_OK",
        "SYSREP_STATUS_GUARD_EXCEEDED",
        "typedef struct SysrepSystem SysrepSystem",
    ] {
        assert!(header.contains(symbol), "header is missing {symbol}");
    }
}
