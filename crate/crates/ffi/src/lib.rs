//! C ABI for `ternstem`.
//!
//! Handles are opaque and owned by the caller once returned; free them with
//! the matching `*_free` function. Strings returned through `char **`
//! out-parameters are NUL-terminated digit strings owned by the caller and
//! released with [`ts_string_free`]. Every fallible call returns a
//! [`TsStatus`]; on failure [`ts_last_error`] describes the problem for the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ternstem::search::{search_seeds, SearchMode, SearchOptions};
use ternstem::{
    berstel_test, is_square_free, Error, IncrementalChecker, Letter, TernaryMorphism, TernaryWord,
};

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum TsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Nonexistent = 3,
    VerificationFailed = 4,
    Internal = 5,
}

/// A ternary morphism.
pub struct TsMorphism {
    morphism: TernaryMorphism,
}

/// Incremental square-freeness checker.
pub struct TsChecker {
    inner: IncrementalChecker,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let s = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).unwrap_or_default());
}

fn status_for(e: &Error) -> TsStatus {
    match e {
        Error::Nonexistent { .. } => TsStatus::Nonexistent,
        Error::Verification(_)
        | Error::ConstructionFailed { .. }
        | Error::StreamRejected { .. } => TsStatus::VerificationFailed,
        Error::Json(_) | Error::Record(_) | Error::Io { .. } => TsStatus::Internal,
        _ => TsStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (TsStatus, String)>) -> TsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TsStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("panic inside ternstem");
            TsStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (TsStatus, String) {
    (status_for(&e), e.to_string())
}

fn null(name: &str) -> (TsStatus, String) {
    (TsStatus::NullPointer, format!("{name} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, (TsStatus, String)> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (TsStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) {
    *out = CString::new(s)
        .expect("digit strings have no NUL")
        .into_raw();
}

/// Message for the last failed call on this thread. Valid until the next
/// failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn ts_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ts_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ts_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Certified n-uniform square-free cyclic shift morphism.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_morphism_construct(n: usize, out: *mut *mut TsMorphism) -> TsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let c = ternstem::construct(n).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(TsMorphism {
            morphism: c.morphism,
        }));
        Ok(())
    })
}

/// The cyclic shift morphism with `f(0) = seed` (uncertified).
///
/// # Safety
/// `seed` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_morphism_from_seed(
    seed: *const c_char,
    out: *mut *mut TsMorphism,
) -> TsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let seed = TernaryWord::ingest(read_str(seed, "seed")?).map_err(lib_err)?;
        let morphism = TernaryMorphism::from_seed(&seed).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(TsMorphism { morphism }));
        Ok(())
    })
}

/// # Safety
/// `m` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ts_morphism_free(m: *mut TsMorphism) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Common image length, or 0 if the morphism is not uniform.
///
/// # Safety
/// `m` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ts_morphism_length(m: *const TsMorphism) -> usize {
    m.as_ref()
        .and_then(|m| m.morphism.uniform_length())
        .unwrap_or(0)
}

/// Image of `letter` (0, 1 or 2).
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_morphism_image(
    m: *const TsMorphism,
    letter: u8,
    out: *mut *mut c_char,
) -> TsStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("morphism"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let a = Letter::new(letter).map_err(lib_err)?;
        write_string(out, m.morphism.image(a).to_string());
        Ok(())
    })
}

/// Image of a word.
///
/// # Safety
/// `m` must be a live handle, `word` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ts_morphism_apply(
    m: *const TsMorphism,
    word: *const c_char,
    out: *mut *mut c_char,
) -> TsStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("morphism"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let w = TernaryWord::ingest(read_str(word, "word")?).map_err(lib_err)?;
        write_string(out, m.morphism.apply(&w).to_string());
        Ok(())
    })
}

/// Berstel square-freeness test of a uniform morphism.
///
/// # Safety
/// `m` must be a live handle and `verdict` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_morphism_berstel(m: *const TsMorphism, verdict: *mut bool) -> TsStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("morphism"))?;
        if verdict.is_null() {
            return Err(null("verdict"));
        }
        *verdict = berstel_test(&m.morphism).map_err(lib_err)?.verdict;
        Ok(())
    })
}

/// # Safety
/// `word` must be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ts_is_square_free(word: *const c_char, out: *mut bool) -> TsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let w = TernaryWord::ingest(read_str(word, "word")?).map_err(lib_err)?;
        *out = is_square_free(&w);
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn ts_checker_new() -> *mut TsChecker {
    Box::into_raw(Box::new(TsChecker {
        inner: IncrementalChecker::new(),
    }))
}

/// # Safety
/// `c` must come from [`ts_checker_new`] and not have been freed. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn ts_checker_free(c: *mut TsChecker) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Appends `letter` if the word stays square-free; `accepted` reports
/// whether it did. A rejected letter leaves the checker unchanged.
///
/// # Safety
/// `c` must be a live handle and `accepted` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_checker_push(
    c: *mut TsChecker,
    letter: u8,
    accepted: *mut bool,
) -> TsStatus {
    guard(|| {
        let c = c.as_mut().ok_or_else(|| null("checker"))?;
        if accepted.is_null() {
            return Err(null("accepted"));
        }
        let a = Letter::new(letter).map_err(lib_err)?;
        *accepted = c.inner.push(a);
        Ok(())
    })
}

/// Removes the last letter, writing it to `letter`.
///
/// # Safety
/// `c` must be a live handle and `letter` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_checker_pop(c: *mut TsChecker, letter: *mut u8) -> TsStatus {
    guard(|| {
        let c = c.as_mut().ok_or_else(|| null("checker"))?;
        if letter.is_null() {
            return Err(null("letter"));
        }
        let a = c
            .inner
            .pop()
            .ok_or_else(|| (TsStatus::InvalidArgument, "checker is empty".to_string()))?;
        *letter = a.value();
        Ok(())
    })
}

/// # Safety
/// `c` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn ts_checker_len(c: *const TsChecker) -> usize {
    c.as_ref().map_or(0, |c| c.inner.len())
}

/// Exhaustive seed search as a JSON record. `all` selects every solution
/// instead of the first; `budget` 0 means unlimited.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_search_json(
    n: usize,
    all: bool,
    budget: u64,
    out: *mut *mut c_char,
) -> TsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let mode = if all {
            SearchMode::All
        } else {
            SearchMode::First
        };
        let options = SearchOptions {
            budget: (budget > 0).then_some(budget),
            ..SearchOptions::default()
        };
        let outcome = search_seeds(n, mode, &options);
        let json =
            serde_json::to_string(&outcome).map_err(|e| (TsStatus::Internal, e.to_string()))?;
        write_string(out, json);
        Ok(())
    })
}

/// The bracketed word r of length 4k - 1 (k >= 6).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_make_x(k: usize, out: *mut *mut c_char) -> TsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let b = ternstem::thue_morse::make_x(k).map_err(lib_err)?;
        write_string(out, b.r.to_string());
        Ok(())
    })
}
