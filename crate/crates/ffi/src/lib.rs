//! C interface: build an analysis from a graph document, query it, render
//! it, and free it. Every function returns a `CcStatus`; results come back
//! through out-pointers. Strings returned to the caller are released with
//! `cc_string_free`, analyses with `cc_analysis_free`.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cutcactus::cuts::Budget;
use cutcactus::generalized::Mode;
use cutcactus::graph::parse_graph;
use cutcactus::oracle::verify_instance;
use cutcactus::pipeline::{analyze, Analysis};
use cutcactus::report::{to_dot, AnalysisDocument};
use cutcactus::Error;

/// Result codes shared by every function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidGraph = 3,
    InvalidArgument = 4,
    BudgetExceeded = 5,
    ThresholdAbsent = 6,
    Structural = 7,
    OutOfRange = 8,
    VerificationFailed = 9,
    Panic = 10,
}

/// Opaque analysis handle.
pub struct CcAnalysis {
    inner: Analysis,
}

fn status_of(e: &Error) -> CcStatus {
    match e {
        Error::BudgetExceeded(_) => CcStatus::BudgetExceeded,
        Error::ThresholdAbsent(_) => CcStatus::ThresholdAbsent,
        Error::Structural(_) => CcStatus::Structural,
        Error::Infeasible(_) | Error::TooFewTerminals(_) | Error::UnknownPair | Error::Io(_) => CcStatus::InvalidArgument,
        Error::Malformed(_)
        | Error::DanglingEndpoint { .. }
        | Error::DuplicateEdge(_)
        | Error::DuplicateVertex(_)
        | Error::UnknownTerminal(_)
        | Error::Disconnected(_)
        | Error::UnknownEdge(_)
        | Error::Json(_) => CcStatus::InvalidGraph,
    }
}

fn guard(f: impl FnOnce() -> CcStatus) -> CcStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(CcStatus::Panic)
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, CcStatus> {
    if p.is_null() {
        return Err(CcStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| CcStatus::InvalidUtf8)
}

fn parse_mode(mode: &str, k: i32) -> Result<(Mode, Option<usize>), CcStatus> {
    let mode = Mode::from_name(mode).ok_or(CcStatus::InvalidArgument)?;
    let k = if k > 0 { Some(k as usize) } else { None };
    if mode.needs_k() && k.is_none() {
        return Err(CcStatus::InvalidArgument);
    }
    Ok((mode, k))
}

unsafe fn give_string(text: String, out: *mut *mut c_char) -> CcStatus {
    match CString::new(text) {
        Ok(s) => {
            *out = s.into_raw();
            CcStatus::Ok
        }
        Err(_) => CcStatus::Structural,
    }
}

/// Runs the pipeline on a JSON graph document. `mode` is one of "ends",
/// "global", "thin", "slim"; `k` is used by thin and slim and ignored when
/// not positive. On success `*out` holds a new handle.
///
/// # Safety
/// `graph_json` and `mode` must be NUL-terminated strings; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cc_analyze(graph_json: *const c_char, mode: *const c_char, k: i32, out: *mut *mut CcAnalysis) -> CcStatus {
    guard(|| {
        if out.is_null() {
            return CcStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let (text, mode) = match (read_str(graph_json), read_str(mode)) {
            (Ok(t), Ok(m)) => (t, m),
            (Err(e), _) | (_, Err(e)) => return e,
        };
        let (mode, k) = match parse_mode(mode, k) {
            Ok(x) => x,
            Err(e) => return e,
        };
        let result = parse_graph(text).and_then(|(g, t)| analyze(&g, &t, mode, k, &Budget::default()));
        match result {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(CcAnalysis { inner }));
                CcStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `handle` must come from `cc_analyze` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cc_analysis_free(handle: *mut CcAnalysis) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Writes the analysis as a JSON document.
///
/// # Safety
/// `handle` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_analysis_to_json(handle: *const CcAnalysis, out: *mut *mut c_char) -> CcStatus {
    guard(|| {
        if handle.is_null() || out.is_null() {
            return CcStatus::NullPointer;
        }
        give_string(AnalysisDocument::new(&(*handle).inner).to_json(), out)
    })
}

/// Writes the cactus in DOT format.
///
/// # Safety
/// `handle` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_analysis_to_dot(handle: *const CcAnalysis, out: *mut *mut c_char) -> CcStatus {
    guard(|| {
        if handle.is_null() || out.is_null() {
            return CcStatus::NullPointer;
        }
        give_string(to_dot(&(*handle).inner), out)
    })
}

/// Number of cut classes.
///
/// # Safety
/// `handle` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_analysis_class_count(handle: *const CcAnalysis, out: *mut usize) -> CcStatus {
    if handle.is_null() || out.is_null() {
        return CcStatus::NullPointer;
    }
    *out = (*handle).inner.classes.len();
    CcStatus::Ok
}

/// Number of cactus vertices.
///
/// # Safety
/// `handle` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_analysis_vertex_count(handle: *const CcAnalysis, out: *mut usize) -> CcStatus {
    if handle.is_null() || out.is_null() {
        return CcStatus::NullPointer;
    }
    *out = (*handle).inner.cactus.vertex_count();
    CcStatus::Ok
}

/// Cactus vertex of terminal `terminal`.
///
/// # Safety
/// `handle` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_analysis_terminal_vertex(handle: *const CcAnalysis, terminal: usize, out: *mut usize) -> CcStatus {
    if handle.is_null() || out.is_null() {
        return CcStatus::NullPointer;
    }
    let cactus = &(*handle).inner.cactus;
    match cactus.terminal_map.get(terminal) {
        Some(&v) => {
            *out = v;
            CcStatus::Ok
        }
        None => CcStatus::OutOfRange,
    }
}

/// The two cactus edges class `class_index` maps to.
///
/// # Safety
/// `handle` must be a live handle; `first` and `second` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_analysis_cut_edges(handle: *const CcAnalysis, class_index: usize, first: *mut usize, second: *mut usize) -> CcStatus {
    if handle.is_null() || first.is_null() || second.is_null() {
        return CcStatus::NullPointer;
    }
    let cactus = &(*handle).inner.cactus;
    match cactus.cut_map.get(class_index) {
        Some(&(x, y)) => {
            *first = x;
            *second = y;
            CcStatus::Ok
        }
        None => CcStatus::OutOfRange,
    }
}

/// Verifies a graph against the brute-force oracle and writes the report
/// as JSON. Returns `VerificationFailed` when any check fails; the report
/// is written either way.
///
/// # Safety
/// `graph_json` and `mode` must be NUL-terminated strings; `report` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cc_verify(graph_json: *const c_char, mode: *const c_char, k: i32, report: *mut *mut c_char) -> CcStatus {
    guard(|| {
        if report.is_null() {
            return CcStatus::NullPointer;
        }
        *report = ptr::null_mut();
        let (text, mode) = match (read_str(graph_json), read_str(mode)) {
            (Ok(t), Ok(m)) => (t, m),
            (Err(e), _) | (_, Err(e)) => return e,
        };
        let (mode, k) = match parse_mode(mode, k) {
            Ok(x) => x,
            Err(e) => return e,
        };
        let (g, t) = match parse_graph(text) {
            Ok(x) => x,
            Err(e) => return status_of(&e),
        };
        let r = verify_instance(&g, &t, mode, k, &Budget::default());
        let text = match serde_json::to_string_pretty(&r) {
            Ok(s) => s,
            Err(_) => return CcStatus::Structural,
        };
        let status = give_string(text, report);
        if status == CcStatus::Ok && !r.passed() {
            return CcStatus::VerificationFailed;
        }
        status
    })
}

/// Static description of a status code. The string must not be freed.
#[no_mangle]
pub extern "C" fn cc_status_message(status: CcStatus) -> *const c_char {
    let s: &'static CStr = match status {
        CcStatus::Ok => c"ok",
        CcStatus::NullPointer => c"null pointer argument",
        CcStatus::InvalidUtf8 => c"string is not valid UTF-8",
        CcStatus::InvalidGraph => c"graph document is invalid",
        CcStatus::InvalidArgument => c"invalid mode, k or parameters",
        CcStatus::BudgetExceeded => c"enumeration budget exceeded",
        CcStatus::ThresholdAbsent => c"threshold is infinite",
        CcStatus::Structural => c"structural failure",
        CcStatus::OutOfRange => c"index out of range",
        CcStatus::VerificationFailed => c"verification failed",
        CcStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}
