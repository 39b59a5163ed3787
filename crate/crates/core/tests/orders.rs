use proptest::prelude::*;

use wqo_core::alphabet::{words_up_to, Alphabet, Word};
use wqo_core::automata::{parse_regex, LabelingAutomaton, SequentialTransducer, DEFAULT_STATE_CAP};
use wqo_core::orders::{
    morphism_leq, order_leq, parse_order, subword_leq, upward_closure_word, FiniteMonoid, Morphism, OrderSpec,
};
use wqo_core::testkit::{mod_brute, morphism_brute, random_nfa, seeded, subword_dp};
use wqo_core::Error;

fn ab() -> Alphabet {
    Alphabet::from_chars("ab").unwrap()
}

fn w(s: &str) -> Word {
    ab().parse_word(s).unwrap()
}

fn z2() -> Morphism {
    Morphism::new(FiniteMonoid::cyclic(2), vec![1], Alphabet::from_chars("a").unwrap()).unwrap()
}

/// A complete deterministic automaton: the minimal DFA of a random language.
fn random_labeling(seed: u64) -> LabelingAutomaton {
    let n = random_nfa(&mut seeded(seed), &ab(), 3, 0.4);
    LabelingAutomaton::from_dfa(n.determinize(DEFAULT_STATE_CAP).unwrap().minimize())
}

fn all_orders() -> Vec<OrderSpec> {
    let proj = SequentialTransducer::projection(&ab(), &[0]).unwrap();
    let via = OrderSpec::via(proj.clone(), OrderSpec::subword(proj.output().clone())).unwrap();
    vec![
        OrderSpec::subword(ab()),
        OrderSpec::modulo(1, ab()).unwrap(),
        OrderSpec::modulo(2, ab()).unwrap(),
        OrderSpec::modulo(3, ab()).unwrap(),
        OrderSpec::labeling(random_labeling(7)),
        via.clone(),
        OrderSpec::conj(vec![OrderSpec::modulo(2, ab()).unwrap(), via]).unwrap(),
        OrderSpec::ltt(1, ab()).unwrap(),
        OrderSpec::ltt(2, ab()).unwrap(),
        OrderSpec::morphism(Morphism::new(FiniteMonoid::cyclic(3), vec![1, 0], ab()).unwrap()),
    ]
}

#[test]
fn subword_examples() {
    let abc = Alphabet::from_chars("abc").unwrap();
    let o = OrderSpec::subword(abc.clone());
    let p = |s: &str| abc.parse_word(s).unwrap();
    assert!(order_leq(&o, &p("ab"), &p("acb")).unwrap());
    assert!(!order_leq(&o, &p("ba"), &p("ab")).unwrap());
    assert!(order_leq(&o, &[], &p("cab")).unwrap());
}

#[test]
fn mod_examples() {
    let o = OrderSpec::modulo(2, ab()).unwrap();
    assert!(order_leq(&o, &w("ab"), &w("abab")).unwrap());
    assert!(!order_leq(&o, &w("a"), &w("ab")).unwrap());
    assert!(OrderSpec::modulo(0, ab()).is_err());
}

#[test]
fn counting_examples() {
    let o = OrderSpec::ltt(1, ab()).unwrap();
    assert!(order_leq(&o, &w("ab"), &w("abab")).unwrap());
    assert!(!order_leq(&o, &w("ab"), &w("ba")).unwrap());
}

#[test]
fn morphism_examples() {
    let t = z2();
    assert!(morphism_leq(&t, &[0], &[0, 0, 0]));
    assert!(!morphism_leq(&t, &[0], &[0, 0]));
    for x in words_up_to(1, 6) {
        assert!(morphism_leq(&t, &x, &x));
    }
    let trivial = Morphism::new(FiniteMonoid::trivial(), vec![0, 0], ab()).unwrap();
    for u in words_up_to(2, 6) {
        for v in words_up_to(2, 6) {
            assert_eq!(morphism_leq(&trivial, &u, &v), subword_dp(&u, &v));
        }
    }
}

#[test]
fn morphism_matches_decomposition_search() {
    let s3 = Morphism::new(FiniteMonoid::cyclic(3), vec![1, 2], ab()).unwrap();
    for t in [&s3, &Morphism::new(FiniteMonoid::cyclic(2), vec![1, 0], ab()).unwrap()] {
        for u in words_up_to(2, 4) {
            for v in words_up_to(2, 6) {
                assert_eq!(morphism_leq(t, &u, &v), morphism_brute(t, &u, &v), "{u:?} {v:?}");
            }
        }
    }
}

#[test]
fn monoids_are_validated() {
    // 0·1 = 0 but 1 is claimed as identity: identity law fails.
    assert!(FiniteMonoid::new(vec!["x".into(), "e".into()], vec![0, 0, 0, 0], 1).is_err());
    // non-associative table on three elements
    let table = vec![0, 1, 2, 1, 2, 0, 2, 2, 1];
    assert!(FiniteMonoid::new(vec!["e".into(), "p".into(), "q".into()], table, 0).is_err());
}

#[test]
fn upward_closure_examples() {
    let s = OrderSpec::subword(ab());
    let up = upward_closure_word(&s, &w("ab")).unwrap();
    let expect = parse_regex("(a|b)*a(a|b)*b(a|b)*", Some(&ab())).unwrap();
    assert!(up.equivalent(&expect, DEFAULT_STATE_CAP).unwrap());

    let m2 = OrderSpec::modulo(2, ab()).unwrap();
    let even = upward_closure_word(&m2, &[]).unwrap();
    for x in words_up_to(2, 8) {
        assert_eq!(even.accepts(&x), x.len() % 2 == 0);
    }

    let conj = OrderSpec::conj(vec![m2.clone(), s]).unwrap();
    for x in [w(""), w("ab"), w("bba")] {
        let a = upward_closure_word(&conj, &x).unwrap();
        let b = upward_closure_word(&m2, &x).unwrap();
        assert!(a.equivalent(&b, DEFAULT_STATE_CAP).unwrap());
    }
}

#[test]
fn upward_closures_agree_with_the_order() {
    for o in all_orders() {
        for x in words_up_to(2, 3) {
            let up = match upward_closure_word(&o, &x) {
                Ok(n) => n,
                Err(Error::Unsupported(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            for v in words_up_to(2, 8) {
                assert_eq!(up.accepts(&v), o.leq(&x, &v), "{x:?} {v:?}");
            }
        }
    }
}

#[test]
fn words_outside_the_alphabet_are_rejected() {
    let o = OrderSpec::subword(ab());
    assert!(matches!(order_leq(&o, &[2], &[0]), Err(Error::AlphabetMismatch(_))));
}

#[test]
fn order_mini_language() {
    let none = |p: &str| -> wqo_core::Result<String> { Err(Error::Parse(format!("no file {p}"))) };
    assert!(matches!(parse_order("subword", &ab(), &none).unwrap(), OrderSpec::Subword(_)));
    assert!(matches!(parse_order("mod:3", &ab(), &none).unwrap(), OrderSpec::Mod { d: 3, .. }));
    assert!(matches!(parse_order("ltt:1", &ab(), &none).unwrap(), OrderSpec::Counting(_)));
    assert!(matches!(parse_order("conj(mod:2,subword)", &ab(), &none).unwrap(), OrderSpec::Conj(ref p) if p.len() == 2));
    assert!(parse_order("labeling:missing.json", &ab(), &none).is_err());
    assert!(parse_order("mod:x", &ab(), &none).is_err());
    assert!(parse_order("conj()", &ab(), &none).is_err());
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0usize..2, 0..=max)
}

proptest! {
    #[test]
    fn reflexive_and_transitive(u in word(6), v in word(6), x in word(6)) {
        for o in all_orders() {
            prop_assert!(o.leq(&u, &u));
            if o.leq(&u, &v) && o.leq(&v, &x) {
                prop_assert!(o.leq(&u, &x));
            }
        }
    }

    #[test]
    fn subword_agrees_with_dp(u in word(8), v in word(8)) {
        prop_assert_eq!(subword_leq(&u, &v), subword_dp(&u, &v));
    }

    #[test]
    fn mod_refines_subword(u in word(7), v in word(7), d in 1usize..5) {
        let o = OrderSpec::modulo(d, ab()).unwrap();
        prop_assert_eq!(o.leq(&u, &v), mod_brute(d, &u, &v));
        if o.leq(&u, &v) {
            prop_assert!(subword_dp(&u, &v));
            prop_assert_eq!((v.len() - u.len()) % d, 0);
        }
    }

    #[test]
    fn via_is_the_inner_order_on_images(u in word(7), v in word(7)) {
        let f = LabelingAutomaton::build_md(2, ab()).unwrap().run_transducer();
        let inner = OrderSpec::subword(f.output().clone());
        let o = OrderSpec::via(f.clone(), inner.clone()).unwrap();
        let image = |x: &Word| {
            let n = f.apply(&wqo_core::automata::Nfa::from_word(ab(), x)).unwrap();
            n.shortest_word().unwrap()
        };
        prop_assert_eq!(o.leq(&u, &v), inner.leq(&image(&u), &image(&v)));
    }

    #[test]
    fn labeling_order_is_run_embedding_with_equal_ends(seed in 0u64..50, u in word(6), v in word(6)) {
        let a = random_labeling(seed);
        let o = OrderSpec::labeling(a.clone());
        let (ru, rv) = (a.run(&u), a.run(&v));
        let expected = ru.sigma == rv.sigma && subword_dp(&ru.edges, &rv.edges);
        prop_assert_eq!(o.leq(&u, &v), expected);
    }
}
