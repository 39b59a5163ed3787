use wqo_core::alphabet::Alphabet;
use wqo_core::analysis::adherence_member;
use wqo_core::automata::{parse_regex, Nfa, SequentialTransducer, DEFAULT_STATE_CAP};
use wqo_core::ideals::{parse_ideal, pump_pattern, ExtLoopPattern, IdealRep};
use wqo_core::orders::OrderSpec;
use wqo_core::separability::{
    family_separate, is_ptl, mod_bound, mod_separate, mod_separate_fixed, ptl_separate, verify_separator, PtlFormula,
    SeparabilityVerdict,
};

fn ab() -> Alphabet {
    Alphabet::from_chars("ab").unwrap()
}

fn re(s: &str) -> Nfa {
    parse_regex(s, Some(&ab())).unwrap()
}

fn show(o: &OrderSpec, v: &SeparabilityVerdict) -> String {
    match v {
        SeparabilityVerdict::Separable { formula, .. } => format!("sep {}", formula.display(o.alphabet())),
        SeparabilityVerdict::Inseparable { certificate } => format!("insep {}", certificate.display(o)),
        SeparabilityVerdict::Inconclusive { budget } => format!("inconclusive {budget}"),
    }
}

#[test]
fn parity_languages_under_mod2_and_subword() {
    let m2 = OrderSpec::modulo(2, ab()).unwrap();
    let v = ptl_separate(&m2, &re("(aa)*"), &re("a(aa)*"), 4).unwrap();
    assert!(v.is_separable(), "{}", show(&m2, &v));
    let sw = OrderSpec::subword(ab());
    let v = ptl_separate(&sw, &re("(aa)*"), &re("a(aa)*"), 4).unwrap();
    assert_eq!(show(&sw, &v), "insep (a)*");
}

#[test]
fn abba_loops_behind_different_letters_are_inseparable_at_2() {
    let m2 = OrderSpec::modulo(2, ab()).unwrap();
    let v = ptl_separate(&m2, &re("a(abba)*"), &re("b(abba)*"), 4).unwrap();
    assert!(v.is_inseparable(), "{}", show(&m2, &v));
}

#[test]
fn alternating_words_are_separable_at_2() {
    let m2 = OrderSpec::modulo(2, ab()).unwrap();
    let v = ptl_separate(&m2, &re("a(ba)*"), &re("b(ab)*"), 4).unwrap();
    assert!(v.is_separable(), "{}", show(&m2, &v));
}

#[test]
fn even_length_atom_separates_parities() {
    let m2 = OrderSpec::modulo(2, ab()).unwrap();
    let f = PtlFormula::Atom(vec![]);
    assert!(verify_separator(&m2, &f, &re("(aa)*"), &re("a(aa)*")).unwrap());
    assert!(!verify_separator(&m2, &f, &re("a(aa)*"), &re("(aa)*")).unwrap());
}

#[test]
fn ptl_membership() {
    let sw = OrderSpec::subword(ab());
    assert!(is_ptl(&sw, &re("(a|b)*a(a|b)*b(a|b)*"), 3).unwrap().is_separable());
    assert!(is_ptl(&sw, &re("(aa)*"), 3).unwrap().is_inseparable());
}

#[test]
fn bounds_and_search() {
    assert_eq!(mod_bound(1).to_string(), "2");
    assert_eq!(mod_bound(2).to_string(), "80640");
    let r = mod_separate(&re("(aa)*"), &re("a(aa)*"), 64, 4).unwrap();
    assert!(r.verdict.is_separable());
    assert!(mod_separate_fixed(4, &re("a(abba)*"), &re("b(abba)*"), 4).unwrap().is_separable());
}

const PAIRS: [(&str, &str); 6] = [
    ("(ab)*", "(ba)*"),
    ("a(aa)*", "(aa)*"),
    ("a*", "b(a|b)*"),
    ("a(abba)*", "b(abba)*"),
    ("(a|b)*aa(a|b)*", "(b|ab)*"),
    ("ab", "ba"),
];

#[test]
fn verdicts_are_symmetric() {
    for o in [OrderSpec::subword(ab()), OrderSpec::modulo(2, ab()).unwrap()] {
        for (k, l) in PAIRS {
            let there = ptl_separate(&o, &re(k), &re(l), 4).unwrap();
            let back = ptl_separate(&o, &re(l), &re(k), 4).unwrap();
            assert_eq!(there.is_separable(), back.is_separable(), "{k} / {l}");
            assert_eq!(there.is_inseparable(), back.is_inseparable(), "{k} / {l}");
        }
    }
}

/// A separator at `d` is also one at `ℓd`, so `ℓd` may never come out inseparable. Atoms at `ℓd` can
/// need longer words than the budget allows: `a*` against `b(a|b)*` needs `↑b x` for every `|x| < 6`
/// at modulus 6, so that instance is only required not to be refuted.
#[test]
fn separability_is_monotone_in_the_modulus() {
    let mut open = Vec::new();
    for (ks, ls) in PAIRS {
        let (k, l) = (re(ks), re(ls));
        for d in [1, 2] {
            if mod_separate_fixed(d, &k, &l, 4).unwrap().is_separable() {
                for ell in [2, 3] {
                    let v = mod_separate_fixed(ell * d, &k, &l, 4).unwrap();
                    assert!(!v.is_inseparable(), "d = {d}, ℓ = {ell}");
                    if !v.is_separable() {
                        open.push((ks, ell * d));
                    }
                }
            }
        }
    }
    assert_eq!(open, vec![("a*", 6)]);
}

#[test]
fn family_atoms_agree_with_the_conjunction_order() {
    let via = |keep: usize| {
        let f = SequentialTransducer::projection(&ab(), &[keep]).unwrap();
        let inner = OrderSpec::subword(f.output().clone());
        OrderSpec::via(f, inner).unwrap()
    };
    let o = OrderSpec::conj(vec![via(0), via(1)]).unwrap();
    for (k, l, separable) in [("aa*", "b*", true), ("(aa)*", "a(aa)*", false), ("ab", "ba", false)] {
        let (k, l) = (re(k), re(l));
        let fam = family_separate(&o, &k, &l, 3).unwrap();
        let full = ptl_separate(&o, &k, &l, 3).unwrap();
        assert_eq!(fam.is_separable(), separable);
        assert_eq!(full.is_separable(), separable);
        assert_eq!(fam.is_inseparable(), full.is_inseparable());
    }
}

#[test]
fn pumped_certificates_stay_adherent() {
    let one_state = ["a*", "b*", "(a|b)*"];
    for k in one_state {
        for l in one_state {
            let (k, l) = (re(k).minimize(DEFAULT_STATE_CAP).unwrap().trim(), re(l).minimize(DEFAULT_STATE_CAP).unwrap().trim());
            assert_eq!((k.num_states(), l.num_states()), (1, 1));
            let p = match mod_separate_fixed(2, &k, &l, 4).unwrap() {
                SeparabilityVerdict::Inseparable { certificate: IdealRep::Ext(p) } => p,
                SeparabilityVerdict::Inseparable { certificate: IdealRep::Loop(p) } => ExtLoopPattern::from_plain(p),
                _ => panic!("one-state languages share ε"),
            };
            for ell in [2, 3] {
                let q = pump_pattern(&k, 1, 2, &p, ell).unwrap();
                let o = OrderSpec::modulo(2 * ell, ab()).unwrap();
                assert!(adherence_member(&o, &IdealRep::Ext(q.clone()), &k).unwrap());
                assert!(adherence_member(&o, &IdealRep::Ext(q), &l).unwrap());
            }
        }
    }
    let all = Nfa::universal(ab());
    let p = parse_ideal(&OrderSpec::modulo(2, ab()).unwrap(), "a (abba)[1]").unwrap();
    let IdealRep::Ext(p) = p else { panic!("extended literal") };
    for ell in [2, 3] {
        let q = pump_pattern(&all, 1, 2, &p, ell).unwrap();
        let o = OrderSpec::modulo(2 * ell, ab()).unwrap();
        assert!(adherence_member(&o, &IdealRep::Ext(q), &all).unwrap());
    }
}
