//! C ABI for the sysrep analysis library.
//!
//! The surface mirrors the CLI: parse a system document once into an
//! opaque handle, then run analyses that return canonical JSON strings.
//! Every function returns a status code; on failure a thread-local message
//! is available through [`sysrep_last_error_message`]. Strings returned
//! through out-parameters are owned by the caller and must be released
//! with [`sysrep_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::OnceLock;

use sysrep_core::document::{parse_state, SystemDocument, SYSTEM_DOCUMENT_SCHEMA};
use sysrep_core::report::{self, AnalysisOptions};
use sysrep_core::{Error, ErrorCategory};

/// Status codes; aligned with the CLI exit-code contract.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SysrepStatus {
    /// Success.
    Ok = 0,
    /// A verification suite failed (the report is still returned).
    PropertyFailure = 1,
    /// Malformed input: bad JSON, bad descriptor, bad element, null pointer.
    InvalidInput = 2,
    /// A resource guard tripped (degree, extension size, state count).
    GuardExceeded = 3,
    /// A mathematical precondition does not hold for the input.
    Precondition = 4,
    /// Internal panic; the library state is still usable.
    Panic = 5,
}

/// Opaque handle to a parsed and validated system document.
pub struct SysrepSystem {
    doc: SystemDocument,
}

/// Analysis knobs. Zero-initialize and set what you need; `trials = 0`
/// and `max_states = 0` select the defaults (256 and 10^6).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SysrepOptions {
    pub trials: u32,
    pub max_states: u64,
    pub workers: u32,
    /// When nonzero, `seed` overrides the document seed.
    pub has_seed_override: u8,
    pub seed: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("error message had NUL").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_for(err: &Error) -> SysrepStatus {
    match err.category() {
        ErrorCategory::Validation => SysrepStatus::InvalidInput,
        ErrorCategory::Guard => SysrepStatus::GuardExceeded,
        ErrorCategory::Precondition => SysrepStatus::Precondition,
    }
}

fn guarded(f: impl FnOnce() -> SysrepStatus) -> SysrepStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            SysrepStatus::Panic
        }
    }
}

fn options_from(opts: *const SysrepOptions) -> AnalysisOptions {
    let mut out = AnalysisOptions::default();
    if opts.is_null() {
        return out;
    }
    let o = unsafe { &*opts };
    if o.trials > 0 {
        out.trials = o.trials;
    }
    if o.max_states > 0 {
        out.max_states = o.max_states;
    }
    if o.workers > 0 {
        out.workers = o.workers as usize;
    }
    if o.has_seed_override != 0 {
        out.seed_override = Some(o.seed);
    }
    out
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> SysrepStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            SysrepStatus::Ok
        }
        Err(_) => {
            set_error("output contained an interior NUL".into());
            SysrepStatus::Panic
        }
    }
}

/// Message for the most recent failure on this thread, or NULL. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sysrep_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map(|c| c.as_ptr())
            .unwrap_or(ptr::null())
    })
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sysrep_version() -> *const c_char {
    static VERSION: OnceLock<CString> = OnceLock::new();
    VERSION
        .get_or_init(|| CString::new(env!("CARGO_PKG_VERSION")).unwrap())
        .as_ptr()
}

/// JSON Schema for system documents as a static string.
#[no_mangle]
pub extern "C" fn sysrep_document_schema() -> *const c_char {
    static SCHEMA: OnceLock<CString> = OnceLock::new();
    SCHEMA
        .get_or_init(|| CString::new(SYSTEM_DOCUMENT_SCHEMA).unwrap())
        .as_ptr()
}

/// Parse and validate a system document. On success `*out` owns the
/// handle; release it with [`sysrep_system_free`].
///
/// # Safety
/// `json` must be a valid NUL-terminated UTF-8 string and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn sysrep_system_parse_json(
    json: *const c_char,
    out: *mut *mut SysrepSystem,
) -> SysrepStatus {
    guarded(|| {
        clear_error();
        if json.is_null() || out.is_null() {
            set_error("null pointer argument".into());
            return SysrepStatus::InvalidInput;
        }
        let text = match CStr::from_ptr(json).to_str() {
            Ok(t) => t,
            Err(_) => {
                set_error("document is not valid UTF-8".into());
                return SysrepStatus::InvalidInput;
            }
        };
        match SystemDocument::parse_str(text) {
            Ok(doc) => {
                *out = Box::into_raw(Box::new(SysrepSystem { doc }));
                SysrepStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                status_for(&e)
            }
        }
    })
}

/// Release a handle from [`sysrep_system_parse_json`]. NULL is a no-op.
///
/// # Safety
/// `sys` must be a pointer previously returned by this library.
#[no_mangle]
pub unsafe extern "C" fn sysrep_system_free(sys: *mut SysrepSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Release a string returned through an out-parameter. NULL is a no-op.
///
/// # Safety
/// `s` must be a pointer previously returned by this library.
#[no_mangle]
pub unsafe extern "C" fn sysrep_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn run_report(
    sys: *const SysrepSystem,
    opts: *const SysrepOptions,
    out_json: *mut *mut c_char,
    runner: impl Fn(&SystemDocument, &AnalysisOptions) -> sysrep_core::Result<report::Rendered>,
) -> SysrepStatus {
    clear_error();
    if sys.is_null() || out_json.is_null() {
        set_error("null pointer argument".into());
        return SysrepStatus::InvalidInput;
    }
    let options = options_from(opts);
    match runner(&(*sys).doc, &options) {
        Ok(rendered) => write_string(out_json, report::canonical_string(&rendered.json)),
        Err(e) => {
            set_error(e.to_string());
            status_for(&e)
        }
    }
}

/// Full analysis report as canonical JSON.
///
/// # Safety
/// `sys` must be a live handle; `out_json` a valid pointer; `opts` NULL or
/// valid.
#[no_mangle]
pub unsafe extern "C" fn sysrep_analyze_json(
    sys: *const SysrepSystem,
    opts: *const SysrepOptions,
    out_json: *mut *mut c_char,
) -> SysrepStatus {
    guarded(|| run_report(sys, opts, out_json, report::analyze))
}

/// Minimal/characteristic polynomials and their factorizations.
///
/// # Safety
/// Same contract as [`sysrep_analyze_json`].
#[no_mangle]
pub unsafe extern "C" fn sysrep_factors_json(
    sys: *const SysrepSystem,
    opts: *const SysrepOptions,
    out_json: *mut *mut c_char,
) -> SysrepStatus {
    guarded(|| run_report(sys, opts, out_json, report::factors_report))
}

/// Primary decomposition and invariant factors.
///
/// # Safety
/// Same contract as [`sysrep_analyze_json`].
#[no_mangle]
pub unsafe extern "C" fn sysrep_decompose_json(
    sys: *const SysrepSystem,
    opts: *const SysrepOptions,
    out_json: *mut *mut c_char,
) -> SysrepStatus {
    guarded(|| run_report(sys, opts, out_json, report::decompose_report))
}

/// Orbit census with enumeration cross-check.
///
/// # Safety
/// Same contract as [`sysrep_analyze_json`].
#[no_mangle]
pub unsafe extern "C" fn sysrep_orbits_json(
    sys: *const SysrepSystem,
    opts: *const SysrepOptions,
    out_json: *mut *mut c_char,
) -> SysrepStatus {
    guarded(|| run_report(sys, opts, out_json, report::orbits_report))
}

/// Trajectory listing. `x0` uses the same syntax as the CLI flag:
/// comma-separated or a JSON array of canonical element encodings.
///
/// # Safety
/// `sys` must be a live handle; `x0` a valid NUL-terminated string;
/// `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sysrep_simulate_json(
    sys: *const SysrepSystem,
    x0: *const c_char,
    steps: i64,
    out_json: *mut *mut c_char,
) -> SysrepStatus {
    guarded(|| {
        clear_error();
        if sys.is_null() || x0.is_null() || out_json.is_null() {
            set_error("null pointer argument".into());
            return SysrepStatus::InvalidInput;
        }
        let x0_text = match CStr::from_ptr(x0).to_str() {
            Ok(t) => t,
            Err(_) => {
                set_error("x0 is not valid UTF-8".into());
                return SysrepStatus::InvalidInput;
            }
        };
        let doc = &(*sys).doc;
        let state = match parse_state(&doc.field, x0_text) {
            Ok(s) => s,
            Err(e) => {
                set_error(e.to_string());
                return status_for(&e);
            }
        };
        match report::simulate_report(doc, &state, steps) {
            Ok(rendered) => write_string(out_json, report::canonical_string(&rendered.json)),
            Err(e) => {
                set_error(e.to_string());
                status_for(&e)
            }
        }
    })
}

/// Property verification. Returns `Ok` when every suite passes,
/// `PropertyFailure` when one fails; the JSON report is written either
/// way.
///
/// # Safety
/// Same contract as [`sysrep_analyze_json`].
#[no_mangle]
pub unsafe extern "C" fn sysrep_verify_json(
    sys: *const SysrepSystem,
    opts: *const SysrepOptions,
    out_json: *mut *mut c_char,
) -> SysrepStatus {
    guarded(|| {
        clear_error();
        if sys.is_null() || out_json.is_null() {
            set_error("null pointer argument".into());
            return SysrepStatus::InvalidInput;
        }
        let options = options_from(opts);
        match report::verify_report(&(*sys).doc, &options, None) {
            Ok((rendered, pass)) => {
                let st = write_string(out_json, report::canonical_string(&rendered.json));
                if st != SysrepStatus::Ok {
                    return st;
                }
                if pass {
                    SysrepStatus::Ok
                } else {
                    set_error("a verification suite failed".into());
                    SysrepStatus::PropertyFailure
                }
            }
            Err(e) => {
                set_error(e.to_string());
                status_for(&e)
            }
        }
    })
}
