//! C interface to the fml2hol translator and countermodel search.
//!
//! Every fallible function returns an [`Fml2holStatus`]; on failure a
//! message is available from [`fml2hol_last_error`] on the same thread.
//! Strings handed out by the library are released with
//! [`fml2hol_string_free`], problems with [`fml2hol_problem_free`].

use fml2hol::embedding::{embed_problem, TranslationConfig};
use fml2hol::fml::Problem;
use fml2hol::kripke::{find_countermodel, print_model, SearchBounds, SearchResult};
use fml2hol::qmf::parse_problem;
use fml2hol::thf::{emit_problem, EmissionMode, DEFAULT_WRAP};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fml2holStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ConfigError = 4,
    EmbedError = 5,
    SearchError = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fml2holVerdict {
    /// A countermodel was found.
    CounterSatisfiable = 0,
    /// None within the bounds. Not a proof.
    NoCountermodel = 1,
    Timeout = 2,
}

/// Opaque parsed and validated modal problem.
pub struct Fml2holProblem {
    problem: Problem,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn guard(f: impl FnOnce() -> Result<(), (Fml2holStatus, String)>) -> Fml2holStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => Fml2holStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            Fml2holStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (Fml2holStatus, String)> {
    if p.is_null() {
        return Err((Fml2holStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (Fml2holStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

fn give_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

fn config(format: *const c_char) -> Result<TranslationConfig, (Fml2holStatus, String)> {
    let f = unsafe { read_str(format, "format") }?;
    TranslationConfig::from_format(f).map_err(|e| (Fml2holStatus::ConfigError, e.to_string()))
}

fn problem_ref<'a>(p: *const Fml2holProblem) -> Result<&'a Problem, (Fml2holStatus, String)> {
    if p.is_null() {
        return Err((Fml2holStatus::NullArgument, "problem is null".into()));
    }
    Ok(unsafe { &(*p).problem })
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn fml2hol_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static, nul-terminated version string.
#[no_mangle]
pub extern "C" fn fml2hol_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parse qmf text into a problem handle.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fml2hol_problem_parse(text: *const c_char, out: *mut *mut Fml2holProblem) -> Fml2holStatus {
    guard(|| {
        if out.is_null() {
            return Err((Fml2holStatus::NullArgument, "out is null".into()));
        }
        *out = ptr::null_mut();
        let text = read_str(text, "text")?;
        let problem = parse_problem(text).map_err(|e| (Fml2holStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(Fml2holProblem { problem }));
        Ok(())
    })
}

/// # Safety
/// `problem` must come from [`fml2hol_problem_parse`] and not be freed
/// already. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fml2hol_problem_free(problem: *mut Fml2holProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Number of annotated formulas in the problem, 0 for null.
///
/// # Safety
/// `problem` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn fml2hol_problem_unit_count(problem: *const Fml2holProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.problem.units.len())
}

/// Translate to a self-contained thf0 problem. `format` is
/// `thf:<logic>:<domain>`.
///
/// # Safety
/// `problem` must be a live handle, `format` a nul-terminated string and
/// `out_thf` a valid pointer. The result is freed with
/// [`fml2hol_string_free`].
#[no_mangle]
pub unsafe extern "C" fn fml2hol_translate(
    problem: *const Fml2holProblem,
    format: *const c_char,
    out_thf: *mut *mut c_char,
) -> Fml2holStatus {
    guard(|| {
        if out_thf.is_null() {
            return Err((Fml2holStatus::NullArgument, "out_thf is null".into()));
        }
        *out_thf = ptr::null_mut();
        let problem = problem_ref(problem)?;
        let config = config(format)?;
        let hol = embed_problem(problem, &config).map_err(|e| (Fml2holStatus::EmbedError, e.to_string()))?;
        let emitted = emit_problem(&hol, &config, &EmissionMode::Inline, DEFAULT_WRAP);
        *out_thf = give_string(emitted.problem_text);
        Ok(())
    })
}

/// Bounded countermodel search. A `timeout_secs` of zero or less means no
/// budget. On a countermodel, `*out_model` (if `out_model` is not null)
/// receives the model in fixture format; otherwise it is set to null.
///
/// # Safety
/// `problem` must be a live handle, `format` a nul-terminated string,
/// `out_verdict` a valid pointer and `out_model` valid or null.
#[no_mangle]
pub unsafe extern "C" fn fml2hol_check(
    problem: *const Fml2holProblem,
    format: *const c_char,
    max_worlds: u32,
    max_individuals: u32,
    timeout_secs: f64,
    out_verdict: *mut Fml2holVerdict,
    out_model: *mut *mut c_char,
) -> Fml2holStatus {
    guard(|| {
        if out_verdict.is_null() {
            return Err((Fml2holStatus::NullArgument, "out_verdict is null".into()));
        }
        if !out_model.is_null() {
            *out_model = ptr::null_mut();
        }
        let problem = problem_ref(problem)?;
        let config = config(format)?;
        let mut bounds = SearchBounds::new(max_worlds as usize, max_individuals as usize);
        if timeout_secs > 0.0 {
            let budget = Duration::try_from_secs_f64(timeout_secs)
                .map_err(|_| (Fml2holStatus::SearchError, format!("invalid timeout {timeout_secs}")))?;
            bounds = bounds.with_time_budget(budget);
        }
        let result =
            find_countermodel(problem, &config, &bounds).map_err(|e| (Fml2holStatus::SearchError, e.to_string()))?;
        *out_verdict = match result {
            SearchResult::Countermodel { model, .. } => {
                if !out_model.is_null() {
                    *out_model = give_string(print_model(&model));
                }
                Fml2holVerdict::CounterSatisfiable
            }
            SearchResult::NoCountermodelWithinBounds => Fml2holVerdict::NoCountermodel,
            SearchResult::Timeout => Fml2holVerdict::Timeout,
        };
        Ok(())
    })
}

/// # Safety
/// `s` must be a string returned by this library and not yet freed. Null
/// is ignored.
#[no_mangle]
pub unsafe extern "C" fn fml2hol_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
