use wqo_core::alphabet::Alphabet;
use wqo_core::analysis::{adherence_member, adherence_member_by_closure, association_check, downward_closure};
use wqo_core::automata::{parse_regex, Nfa, DEFAULT_STATE_CAP};
use wqo_core::ideals::{
    enumerate_ideals, ideal_decompose, ideal_equal, ideal_to_nfa, make_extended_irreducible, parse_ideal,
    pattern_irreducible, pump_pattern, pump_word_up, ExtLoopPattern, IdealRep, PatternLiteral,
};
use wqo_core::orders::OrderSpec;

fn ab() -> Alphabet {
    Alphabet::from_chars("ab").unwrap()
}

fn re(s: &str) -> Nfa {
    parse_regex(s, Some(&ab())).unwrap()
}

fn ext(src: &str, d: usize) -> ExtLoopPattern {
    PatternLiteral::parse(src, &ab()).unwrap().to_ext(d).unwrap()
}

#[test]
fn mod2_closures_of_the_two_loop_languages_are_even_words() {
    let o = OrderSpec::modulo(2, ab()).unwrap();
    let even = re("((a|b)(a|b))*");
    for l in ["(aa)*(abba)*", "(abba)*"] {
        let c = downward_closure(&o, &re(l)).unwrap();
        assert!(c.equivalent(&even, DEFAULT_STATE_CAP).unwrap(), "{l}");
    }
}

#[test]
fn odd_words_ideal_adheres_to_b_prefixed_words() {
    let o = OrderSpec::modulo(2, ab()).unwrap();
    let i = parse_ideal(&o, "a (abba)").unwrap();
    assert!(adherence_member(&o, &i, &re("b(a|b)*")).unwrap());
    assert!(adherence_member_by_closure(&o, &i, &re("b(a|b)*")).unwrap());
    assert!(!adherence_member(&o, &i, &re("(aa)*")).unwrap());
}

#[test]
fn aa_abba_pattern_is_not_associated_to_abba_star() {
    let o = OrderSpec::modulo(2, ab()).unwrap();
    let p = parse_ideal(&o, "(aa)(abba)").unwrap();
    assert!(!association_check(&o, &p, &re("(abba)*")).unwrap());
    let q = parse_ideal(&o, "(abba)").unwrap();
    assert!(association_check(&o, &q, &re("(abba)*")).unwrap());
}

#[test]
fn single_loop_after_letter_is_irreducible() {
    let o = OrderSpec::modulo(2, ab()).unwrap();
    assert!(pattern_irreducible(&o, &parse_ideal(&o, "a (abba)").unwrap()).unwrap());
    assert!(!pattern_irreducible(&o, &parse_ideal(&o, "(aa)(abba)").unwrap()).unwrap());
}

#[test]
fn reducing_two_loops_keeps_the_ideal() {
    let o = OrderSpec::modulo(2, ab()).unwrap();
    let p = ext("(aa)[0](abba)[0]", 2);
    let q = make_extended_irreducible(&o, &p, 4).unwrap();
    assert!(ideal_equal(&o, &IdealRep::Ext(q.clone()), &parse_ideal(&o, "(abba)").unwrap()).unwrap());
    assert!(q.num_loops() <= 1);
}

#[test]
fn decomposition_of_subword_closure() {
    let o = OrderSpec::subword(ab());
    let l = downward_closure(&o, &re("(ab)*")).unwrap();
    let parts = ideal_decompose(&o, &l).unwrap();
    assert_eq!(parts.len(), 1);
    assert_eq!(parts[0].display(&o).to_string(), "(ab)*");
}

#[test]
fn decomposition_of_even_words_is_a_single_loop() {
    let o = OrderSpec::modulo(2, ab()).unwrap();
    let parts = ideal_decompose(&o, &re("((a|b)(a|b))*")).unwrap();
    assert_eq!(parts.len(), 1);
    let n = ideal_to_nfa(&o, &parts[0]).unwrap();
    assert!(n.equivalent(&re("((a|b)(a|b))*"), DEFAULT_STATE_CAP).unwrap());
}

#[test]
fn enumeration_finds_a_star_below_both_parities() {
    let o = OrderSpec::subword(Alphabet::from_chars("a").unwrap());
    let k = parse_regex("(aa)*", None).unwrap();
    let l = parse_regex("a(aa)*", None).unwrap();
    let found = enumerate_ideals(&o, 2, &[&k, &l]).unwrap();
    assert!(found.iter().any(|i| i.display(&o).to_string() == "(a)*"), "{:?}", found);
}

#[test]
fn pumping_a_word_on_the_universal_automaton() {
    let a = Nfa::universal(ab());
    let v = ab().parse_word("abba").unwrap();
    let out = pump_word_up(&a, 1, 2, &v, 0, &v, 2).unwrap();
    assert_eq!(out.word.len(), 6);
    assert!(a.accepts(&out.word));
    assert!(pump_word_up(&a, 1, 2, &v, 0, &[], 2).is_err());
}

#[test]
fn pumping_a_pattern_on_the_universal_automaton() {
    let a = Nfa::universal(ab());
    let p = ext("a (abba)[0]", 2);
    let q = pump_pattern(&a, 1, 2, &p, 2).unwrap();
    assert_eq!(q.loops()[0].len(), 8);
}
