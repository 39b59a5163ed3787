use proptest::prelude::*;
use rand::Rng;

use wqo_core::alphabet::{words_up_to, Alphabet, Word};
use wqo_core::analysis::{
    adherence_member, adherence_member_by_closure, counter_unbounded, downward_closure, sup_decide, upward_closure,
};
use wqo_core::automata::{parse_regex, CounterAutomaton, LabelingAutomaton, Nfa, DEFAULT_STATE_CAP};
use wqo_core::ideals::{ideal_decompose, ideal_includes, ideal_to_nfa, parse_ideal, IdealRep};
use wqo_core::orders::{subword_leq, OrderSpec};
use wqo_core::testkit::{random_nfa, seeded};

fn ab() -> Alphabet {
    Alphabet::from_chars("ab").unwrap()
}

fn re(s: &str) -> Nfa {
    parse_regex(s, Some(&ab())).unwrap()
}

const CORPUS: [&str; 8] = ["a*", "(ab)*", "a(abba)*", "b(abba)*", "(a|b)*b", "a*b*", "((a|b)(a|b))*", "ab|ba"];

fn orders() -> Vec<OrderSpec> {
    let md = LabelingAutomaton::from_dfa(re("(a|b)*a").determinize(DEFAULT_STATE_CAP).unwrap().minimize());
    vec![OrderSpec::subword(ab()), OrderSpec::modulo(2, ab()).unwrap(), OrderSpec::labeling(md)]
}

/// Sampled directedness: random pairs of members of length `≤ 6` have an upper bound of length `≤ 12`.
fn directed_on_samples(i: &Nfa, seed: u64) -> bool {
    let small: Vec<Word> = words_up_to(2, 6).into_iter().filter(|w| i.accepts(w)).collect();
    let big: Vec<Word> = words_up_to(2, 12).into_iter().filter(|w| i.accepts(w)).collect();
    let mut rng = seeded(seed);
    (0..200).all(|_| {
        let x = &small[rng.gen_range(0..small.len())];
        let y = &small[rng.gen_range(0..small.len())];
        big.iter().any(|z| subword_leq(x, z) && subword_leq(y, z))
    })
}

#[test]
fn closures_are_closed() {
    for o in orders() {
        for src in CORPUS {
            let c = downward_closure(&o, &re(src)).unwrap();
            let up = upward_closure(&o, &re(src)).unwrap();
            let words = words_up_to(2, 7);
            for w in words.iter().filter(|w| c.accepts(w)) {
                for u in words.iter().filter(|u| u.len() <= w.len()) {
                    if o.leq(u, w) {
                        assert!(c.accepts(u), "{src}: {u:?} below {w:?}");
                    }
                }
            }
            for w in words.iter().filter(|w| up.accepts(w)) {
                for v in words.iter().filter(|v| v.len() >= w.len()) {
                    if o.leq(w, v) {
                        assert!(up.accepts(v), "{src}: {v:?} above {w:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn adherence_routes_agree_and_imply_inclusion() {
    let o = OrderSpec::modulo(2, ab()).unwrap();
    let ideals = ["(ab)[0]", "(abba)[1]", "(aabb)[0]", "a(abba)", "b(abba)", "(aa)[0]", "(ab)[1]", "ab"];
    for src in CORPUS {
        let l = re(src);
        let c = downward_closure(&o, &l).unwrap();
        for lit in ideals {
            let i = parse_ideal(&o, lit).unwrap();
            let by_counters = adherence_member(&o, &i, &l).unwrap();
            let by_closure = adherence_member_by_closure(&o, &i, &l).unwrap();
            assert_eq!(by_counters, by_closure, "{lit} in Adh({src})");
            if by_counters {
                assert!(ideal_to_nfa(&o, &i).unwrap().is_subset_of(&c, DEFAULT_STATE_CAP).unwrap());
            }
        }
    }
    let s = OrderSpec::subword(ab());
    for src in CORPUS {
        let l = re(src);
        for lit in ["(a)*", "(b)*", "(ab)*", "a (b)*", "ab"] {
            let i = parse_ideal(&s, lit).unwrap();
            assert_eq!(adherence_member(&s, &i, &l).unwrap(), adherence_member_by_closure(&s, &i, &l).unwrap());
        }
    }
}

#[test]
fn decompositions_cover_and_are_directed() {
    let o = OrderSpec::subword(ab());
    for src in CORPUS {
        let l = re(src);
        let c = downward_closure(&o, &l).unwrap();
        let parts = ideal_decompose(&o, &c).unwrap();
        let mut union = Nfa::empty(ab());
        for (i, p) in parts.iter().enumerate() {
            let n = ideal_to_nfa(&o, p).unwrap();
            assert!(directed_on_samples(&n, i as u64), "{src}");
            // an ideal of a decomposition of ↓L is adherent to L
            assert!(adherence_member(&o, p, &l).unwrap(), "{src}");
            for (j, q) in parts.iter().enumerate() {
                if i != j {
                    assert!(!ideal_includes(&o, q, p).unwrap(), "{src}: comparable members");
                }
            }
            union = union.union(&n).unwrap();
        }
        assert!(union.equivalent(&c, DEFAULT_STATE_CAP).unwrap(), "{src}");
    }
}

#[test]
fn inclusion_matches_adherence_for_decomposed_ideals() {
    let o = OrderSpec::modulo(2, ab()).unwrap();
    for src in ["a(abba)*", "(ab)*", "a*b*", "((a|b)(a|b))*"] {
        let l = re(src);
        let c = downward_closure(&o, &l).unwrap();
        for p in ideal_decompose(&o, &c).unwrap() {
            let included = ideal_to_nfa(&o, &p).unwrap().is_subset_of(&c, DEFAULT_STATE_CAP).unwrap();
            assert_eq!(included, adherence_member(&o, &p, &l).unwrap(), "{src}");
        }
    }
}

#[test]
fn simultaneous_unboundedness() {
    let (a, b) = (0, 1);
    assert!(sup_decide(&re("(aa)*(b|bb)*"), &[a, b]).unwrap());
    assert!(sup_decide(&re("a*b*"), &[a, b]).unwrap());
    assert!(!sup_decide(&re("a*|b*"), &[a, b]).unwrap());
    assert!(!sup_decide(&re("a*b"), &[a, b]).unwrap());
    assert!(sup_decide(&re("a*"), &[a]).unwrap());
    assert!(sup_decide(&re("(ab)*"), &[a, b]).is_err());
}

#[test]
fn counter_unboundedness_examples() {
    let mut two = CounterAutomaton::new(ab(), vec!["x".into(), "y".into()]);
    let p = two.add_state();
    let q = two.add_state();
    two.set_initial(p);
    two.set_final(q, true);
    two.add_unit_edge(p, Some(0), 0, p);
    two.add_unit_edge(p, Some(1), 1, q);
    two.add_unit_edge(q, Some(1), 1, q);
    // x grows only in p, y only along b-edges: both counters grow on a*b+
    let r = counter_unbounded(&two, None).unwrap();
    assert!(r.unbounded);
    assert_eq!(r.witness.unwrap().union, vec!["x".to_string(), "y".to_string()]);
    // restricting to words with one a bounds x
    let r = counter_unbounded(&two, Some(&re("ab*"))).unwrap();
    assert!(!r.unbounded);
    assert!(r.witness.is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_closures_are_downward_closed(seed in any::<u64>(), d in 1usize..3) {
        let l = random_nfa(&mut seeded(seed), &ab(), 3, 0.35);
        let o = OrderSpec::modulo(d, ab()).unwrap();
        let c = downward_closure(&o, &l).unwrap();
        let words = words_up_to(2, 6);
        for w in words.iter().filter(|w| c.accepts(w)) {
            for u in &words {
                if o.leq(u, w) {
                    prop_assert!(c.accepts(u));
                }
            }
        }
        prop_assert!(l.is_subset_of(&c, DEFAULT_STATE_CAP).unwrap());
    }

    #[test]
    fn principal_ideals_adhere_iff_members(seed in any::<u64>(), w in prop::collection::vec(0usize..2, 0..4)) {
        let l = random_nfa(&mut seeded(seed), &ab(), 3, 0.35);
        let o = OrderSpec::subword(ab());
        let i = IdealRep::principal(&o, &w).unwrap();
        // a directed subset of L whose downward closure is ↓w must contain w itself
        prop_assert_eq!(adherence_member(&o, &i, &l).unwrap(), l.accepts(&w));
    }
}
