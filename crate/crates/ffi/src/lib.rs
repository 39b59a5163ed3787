//! C interface to `wqo-core`.
//!
//! Automata and orders cross the boundary as opaque handles created by `*_new`/`*_parse` functions
//! and released with the matching `*_free`. Every fallible call returns a [`WqoStatus`] and writes
//! its result through an out-pointer; on failure [`wqo_last_error`] describes the problem.
//! Strings returned by the library are owned by the caller and released with [`wqo_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};


use wqo_core::alphabet::Alphabet;
use wqo_core::analysis::{adherence_member, downward_closure, upward_closure};
use wqo_core::automata::format::AutomatonFile;
use wqo_core::automata::{parse_regex, Nfa};
use wqo_core::ideals::parse_ideal;
use wqo_core::orders::{order_leq, parse_order, OrderSpec};
use wqo_core::separability::{mod_bound, ptl_separate, SeparabilityVerdict};
use wqo_core::Error;

/// Outcome of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WqoStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    AlphabetMismatch = 4,
    Unsupported = 5,
    Precondition = 6,
    StateCap = 7,
    Inconclusive = 8,
    Certification = 9,
    InvalidInput = 10,
    Panic = 11,
}

/// Verdict of [`wqo_separate`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WqoVerdict {
    Separable = 0,
    Inseparable = 1,
    Undecided = 2,
}

/// Opaque automaton handle.
pub struct WqoAutomaton(Nfa);

/// Opaque order handle.
pub struct WqoOrder(OrderSpec);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> WqoStatus {
    match e {
        Error::Parse(_) => WqoStatus::Parse,
        Error::AlphabetMismatch(_) => WqoStatus::AlphabetMismatch,
        Error::Unsupported(_) => WqoStatus::Unsupported,
        Error::Precondition(_) => WqoStatus::Precondition,
        Error::StateCap { .. } => WqoStatus::StateCap,
        Error::Inconclusive(_) => WqoStatus::Inconclusive,
        Error::Certification(_) => WqoStatus::Certification,
        _ => WqoStatus::InvalidInput,
    }
}

struct Fail(WqoStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

type FfiResult<T> = std::result::Result<T, Fail>;

fn guard(f: impl FnOnce() -> FfiResult<()>) -> WqoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            WqoStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            WqoStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Fail(WqoStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(WqoStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| Fail(WqoStatus::NullArgument, format!("{what} is null")))
}

unsafe fn write<T>(out: *mut T, value: T) -> FfiResult<()> {
    if out.is_null() {
        return Err(Fail(WqoStatus::NullArgument, "output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior NUL").into_raw()
}

/// Message for the most recent failed call on this thread; empty after a success. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn wqo_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by the library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn wqo_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds an automaton from a regular expression. `alphabet` lists the symbols (e.g. `"ab"`); when
/// null, the symbols of the expression are used.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wqo_automaton_from_regex(
    regex: *const c_char,
    alphabet: *const c_char,
    out: *mut *mut WqoAutomaton,
) -> WqoStatus {
    guard(|| {
        let r = text(regex, "regex")?;
        let a = if alphabet.is_null() { None } else { Some(Alphabet::from_chars(text(alphabet, "alphabet")?)?) };
        let n = parse_regex(r, a.as_ref())?;
        write(out, Box::into_raw(Box::new(WqoAutomaton(n))))
    })
}

/// Builds an automaton from its JSON or line-format description.
///
/// # Safety
/// `source` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wqo_automaton_parse(source: *const c_char, out: *mut *mut WqoAutomaton) -> WqoStatus {
    guard(|| {
        let n = AutomatonFile::parse(text(source, "source")?)?.to_nfa()?;
        write(out, Box::into_raw(Box::new(WqoAutomaton(n))))
    })
}

/// Releases an automaton.
///
/// # Safety
/// `a` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn wqo_automaton_free(a: *mut WqoAutomaton) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Number of states.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wqo_automaton_num_states(a: *const WqoAutomaton, out: *mut usize) -> WqoStatus {
    guard(|| write(out, handle(a, "automaton")?.0.num_states()))
}

/// Membership of a word (a string of alphabet symbols; `""` is the empty word).
///
/// # Safety
/// `a` must be a live handle; `word` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wqo_automaton_accepts(a: *const WqoAutomaton, word: *const c_char, out: *mut bool) -> WqoStatus {
    guard(|| {
        let a = &handle(a, "automaton")?.0;
        let w = a.alphabet().parse_word(text(word, "word")?)?;
        write(out, a.accepts(&w))
    })
}

/// Renders an automaton in the line format.
///
/// # Safety
/// `a` must be a live handle; `out` writable. Free the result with [`wqo_string_free`].
#[no_mangle]
pub unsafe extern "C" fn wqo_automaton_to_text(a: *const WqoAutomaton, out: *mut *mut c_char) -> WqoStatus {
    guard(|| write(out, c_string(AutomatonFile::from_nfa(&handle(a, "automaton")?.0).to_lines())))
}

/// Parses an order (`subword`, `mod:2`, `conj(...)`, ...) over the given alphabet. File-based orders
/// read their files from the given paths.
///
/// # Safety
/// Strings must be NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wqo_order_parse(source: *const c_char, alphabet: *const c_char, out: *mut *mut WqoOrder) -> WqoStatus {
    guard(|| {
        let a = Alphabet::from_chars(text(alphabet, "alphabet")?)?;
        let load = |p: &str| std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("cannot read {p}: {e}")));
        let o = parse_order(text(source, "order")?, &a, &load)?;
        write(out, Box::into_raw(Box::new(WqoOrder(o))))
    })
}

/// Releases an order.
///
/// # Safety
/// `o` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn wqo_order_free(o: *mut WqoOrder) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// Decides `u ⪯ v`.
///
/// # Safety
/// `o` must be a live handle; words NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wqo_order_leq(o: *const WqoOrder, u: *const c_char, v: *const c_char, out: *mut bool) -> WqoStatus {
    guard(|| {
        let o = &handle(o, "order")?.0;
        let u = o.alphabet().parse_word(text(u, "u")?)?;
        let v = o.alphabet().parse_word(text(v, "v")?)?;
        write(out, order_leq(o, &u, &v)?)
    })
}

/// Downward closure of a language.
///
/// # Safety
/// Handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wqo_downward_closure(o: *const WqoOrder, a: *const WqoAutomaton, out: *mut *mut WqoAutomaton) -> WqoStatus {
    guard(|| {
        let n = downward_closure(&handle(o, "order")?.0, &handle(a, "automaton")?.0)?;
        write(out, Box::into_raw(Box::new(WqoAutomaton(n.trim()))))
    })
}

/// Upward closure of a language.
///
/// # Safety
/// Handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wqo_upward_closure(o: *const WqoOrder, a: *const WqoAutomaton, out: *mut *mut WqoAutomaton) -> WqoStatus {
    guard(|| {
        let n = upward_closure(&handle(o, "order")?.0, &handle(a, "automaton")?.0)?;
        write(out, Box::into_raw(Box::new(WqoAutomaton(n.trim()))))
    })
}

/// Whether the ideal written as a pattern literal lies in the adherence of the language.
///
/// # Safety
/// Handles must be live; `ideal` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wqo_adherence_member(
    o: *const WqoOrder,
    ideal: *const c_char,
    a: *const WqoAutomaton,
    out: *mut bool,
) -> WqoStatus {
    guard(|| {
        let o = &handle(o, "order")?.0;
        let i = parse_ideal(o, text(ideal, "ideal")?)?;
        write(out, adherence_member(o, &i, &handle(a, "automaton")?.0)?)
    })
}

/// Separability of `k` from `l` by boolean combinations of upward closures. `detail` receives the
/// separating formula or the inseparability certificate (empty when undecided); free it with
/// [`wqo_string_free`].
///
/// # Safety
/// Handles must be live; out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn wqo_separate(
    o: *const WqoOrder,
    k: *const WqoAutomaton,
    l: *const WqoAutomaton,
    budget: usize,
    verdict: *mut WqoVerdict,
    detail: *mut *mut c_char,
) -> WqoStatus {
    guard(|| {
        let o = &handle(o, "order")?.0;
        let v = ptl_separate(o, &handle(k, "k")?.0, &handle(l, "l")?.0, budget)?;
        let (tag, s) = match &v {
            SeparabilityVerdict::Separable { formula, .. } => (WqoVerdict::Separable, formula.display(o.alphabet()).to_string()),
            SeparabilityVerdict::Inseparable { certificate } => (WqoVerdict::Inseparable, certificate.display(o).to_string()),
            SeparabilityVerdict::Inconclusive { .. } => (WqoVerdict::Undecided, String::new()),
        };
        if detail.is_null() {
            return Err(Fail(WqoStatus::NullArgument, "detail pointer is null".into()));
        }
        write(verdict, tag)?;
        write(detail, c_string(s))
    })
}

/// The modulus bound `2·(m³)!` in decimal.
///
/// # Safety
/// `out` must be writable; free the result with [`wqo_string_free`].
#[no_mangle]
pub unsafe extern "C" fn wqo_mod_bound(m: usize, out: *mut *mut c_char) -> WqoStatus {
    guard(|| {
        if m == 0 {
            return Err(Fail(WqoStatus::Precondition, "m must be positive".into()));
        }
        write(out, c_string(mod_bound(m).to_string()))
    })
}

