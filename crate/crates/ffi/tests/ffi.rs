use std::ffi::{CStr, CString};
use std::ptr;

use wqo_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    wqo_string_free(s);
    out
}

unsafe fn regex(r: &str) -> *mut WqoAutomaton {
    let mut a = ptr::null_mut();
    assert_eq!(wqo_automaton_from_regex(c(r).as_ptr(), c("ab").as_ptr(), &mut a), WqoStatus::Ok);
    a
}

unsafe fn order(src: &str) -> *mut WqoOrder {
    let mut o = ptr::null_mut();
    assert_eq!(wqo_order_parse(c(src).as_ptr(), c("ab").as_ptr(), &mut o), WqoStatus::Ok);
    o
}

#[test]
fn order_comparisons() {
    unsafe {
        let o = order("mod:2");
        let mut r = false;
        assert_eq!(wqo_order_leq(o, c("ab").as_ptr(), c("abab").as_ptr(), &mut r), WqoStatus::Ok);
        assert!(r);
        assert_eq!(wqo_order_leq(o, c("ab").as_ptr(), c("aab").as_ptr(), &mut r), WqoStatus::Ok);
        assert!(!r);
        wqo_order_free(o);
    }
}

#[test]
fn closures_and_membership() {
    unsafe {
        let o = order("subword");
        let a = regex("ab");
        let mut down = ptr::null_mut();
        assert_eq!(wqo_downward_closure(o, a, &mut down), WqoStatus::Ok);
        let mut hit = false;
        for (w, want) in [("", true), ("a", true), ("b", true), ("ab", true), ("ba", false), ("aab", false)] {
            assert_eq!(wqo_automaton_accepts(down, c(w).as_ptr(), &mut hit), WqoStatus::Ok);
            assert_eq!(hit, want, "{w:?}");
        }
        let mut up = ptr::null_mut();
        assert_eq!(wqo_upward_closure(o, a, &mut up), WqoStatus::Ok);
        assert_eq!(wqo_automaton_accepts(up, c("bbaab").as_ptr(), &mut hit), WqoStatus::Ok);
        assert!(hit);
        let mut text = ptr::null_mut();
        assert_eq!(wqo_automaton_to_text(down, &mut text), WqoStatus::Ok);
        let text = take(text);
        let mut back = ptr::null_mut();
        assert_eq!(wqo_automaton_parse(c(&text).as_ptr(), &mut back), WqoStatus::Ok);
        assert_eq!(wqo_automaton_accepts(back, c("b").as_ptr(), &mut hit), WqoStatus::Ok);
        assert!(hit);
        for h in [a, down, up, back] {
            wqo_automaton_free(h);
        }
        wqo_order_free(o);
    }
}

#[test]
fn separation_verdicts() {
    unsafe {
        let o = order("subword");
        let (k, l) = (regex("(ab)*"), regex("(ba)*"));
        let mut v = WqoVerdict::Undecided;
        let mut detail = ptr::null_mut();
        assert_eq!(wqo_separate(o, k, l, 4, &mut v, &mut detail), WqoStatus::Ok);
        assert_eq!(v, WqoVerdict::Inseparable);
        assert_eq!(take(detail), "ε");
        let (p, q) = (regex("a+"), regex("b+"));
        assert_eq!(wqo_separate(o, p, q, 4, &mut v, &mut detail), WqoStatus::Ok);
        assert_eq!(v, WqoVerdict::Separable);
        assert!(!take(detail).is_empty());
        let mut adh = false;
        assert_eq!(wqo_adherence_member(o, c("(ab)*").as_ptr(), k, &mut adh), WqoStatus::Ok);
        assert!(adh);
        for h in [k, l, p, q] {
            wqo_automaton_free(h);
        }
        wqo_order_free(o);
    }
}

#[test]
fn bound_as_decimal() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(wqo_mod_bound(2, &mut s), WqoStatus::Ok);
        assert_eq!(take(s), "80640");
        assert_eq!(wqo_mod_bound(0, &mut s), WqoStatus::Precondition);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut a = ptr::null_mut();
        assert_eq!(wqo_automaton_from_regex(c("(a").as_ptr(), ptr::null(), &mut a), WqoStatus::Parse);
        assert!(!CStr::from_ptr(wqo_last_error()).to_bytes().is_empty());
        assert_eq!(wqo_automaton_from_regex(ptr::null(), ptr::null(), &mut a), WqoStatus::NullArgument);
        let mut o = ptr::null_mut();
        assert_eq!(wqo_order_parse(c("nonsense:").as_ptr(), c("ab").as_ptr(), &mut o), WqoStatus::Parse);
        let mut n = 0usize;
        assert_eq!(wqo_automaton_num_states(ptr::null(), &mut n), WqoStatus::NullArgument);
        let ok = regex("a");
        assert_eq!(wqo_automaton_num_states(ok, &mut n), WqoStatus::Ok);
        assert!(n >= 1);
        assert!(CStr::from_ptr(wqo_last_error()).to_bytes().is_empty());
        let mut hit = false;
        assert_eq!(wqo_automaton_accepts(ok, c("z").as_ptr(), &mut hit), WqoStatus::AlphabetMismatch);
        wqo_automaton_free(ok);
        wqo_automaton_free(ptr::null_mut());
    }
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/wqo.h")).unwrap();
    for f in ["wqo_order_leq", "wqo_separate", "wqo_mod_bound", "wqo_string_free", "WQO_STATUS_OK"] {
        assert!(h.contains(f), "{f}");
    }
}
