use proptest::prelude::*;

use wqo_core::alphabet::{words_up_to, Alphabet, Letter, Word};
use wqo_core::automata::format::AutomatonFile;
use wqo_core::automata::{
    is_unambiguous, parse_regex, CountingAutomaton, LabelingAutomaton, Nfa, SequentialTransducer, DEFAULT_STATE_CAP,
};
use wqo_core::testkit::{enum_words, random_nfa, seeded};

fn ab() -> Alphabet {
    Alphabet::from_chars("ab").unwrap()
}

fn re(s: &str) -> Nfa {
    parse_regex(s, Some(&ab())).unwrap()
}

fn w(s: &str) -> Word {
    ab().parse_word(s).unwrap()
}

/// Number of positions `ℓ` with `w = x u y`, `|x| = ℓ - 1`; the empty word occurs `|w| + 1` times.
fn occurrences(u: &[Letter], w: &[Letter]) -> u64 {
    if u.len() > w.len() {
        return 0;
    }
    (0..=w.len() - u.len()).filter(|&i| &w[i..i + u.len()] == u).count() as u64
}

fn counter(p: &CountingAutomaton, w: &[Letter], name: &str) -> u64 {
    p.eval(w)[p.counter_index(name).unwrap_or_else(|| panic!("no counter {name}"))]
}

#[test]
fn regular_algebra_examples() {
    assert!(re("ab").is_subset_of(&re("a*b"), DEFAULT_STATE_CAP).unwrap());
    assert!(!re("a*b").is_subset_of(&re("ab"), DEFAULT_STATE_CAP).unwrap());
    let meet = re("a*").intersect(&re("b*")).unwrap().intersect(&re("(a|b)+")).unwrap();
    assert!(meet.is_empty());
    assert!(re("a*").union(&re("b")).unwrap().accepts(&w("b")));
    assert!(re("a").concat(&re("b")).unwrap().equivalent(&re("ab"), DEFAULT_STATE_CAP).unwrap());
    assert!(re("ab").star().equivalent(&re("(ab)*"), DEFAULT_STATE_CAP).unwrap());
    assert_eq!(re("ba*b").shortest_word(), Some(w("bb")));
}

#[test]
fn binary_operations_reject_mixed_alphabets() {
    let abc = parse_regex("c", Some(&Alphabet::from_chars("abc").unwrap())).unwrap();
    assert!(re("a").intersect(&abc).is_err());
    assert!(re("a").union(&abc).is_err());
}

#[test]
fn determinization_reports_the_cap() {
    let err = re("(a|b)*a(a|b)(a|b)(a|b)(a|b)").determinize(4).unwrap_err();
    assert!(err.to_string().contains('4'), "{err}");
}

#[test]
fn complement_is_an_involution_on_random_automata() {
    let mut rng = seeded(11);
    for i in 0..40 {
        let n = random_nfa(&mut rng, &ab(), 1 + i % 4, 0.35);
        let c = n.complement(DEFAULT_STATE_CAP).unwrap();
        for x in words_up_to(2, 8) {
            assert_ne!(n.accepts(&x), c.accepts(&x));
        }
        let cc = c.complement(DEFAULT_STATE_CAP).unwrap();
        assert!(cc.equivalent(&n, DEFAULT_STATE_CAP).unwrap());
    }
}

#[test]
fn minimization_and_epsilon_removal_keep_the_language() {
    let mut rng = seeded(12);
    for _ in 0..30 {
        let n = random_nfa(&mut rng, &ab(), 4, 0.3);
        let m = n.minimize(DEFAULT_STATE_CAP).unwrap();
        assert!(m.num_states() <= n.determinize(DEFAULT_STATE_CAP).unwrap().num_states());
        assert_eq!(enum_words(&m, 7).words, enum_words(&n, 7).words);
        assert_eq!(enum_words(&n.remove_epsilon(), 7).words, enum_words(&n, 7).words);
        assert_eq!(enum_words(&n.reverse().reverse(), 7).words, enum_words(&n, 7).words);
    }
}

#[test]
fn projection_erasing_b() {
    let f = SequentialTransducer::projection(&ab(), &[0]).unwrap();
    let image = f.apply(&re("(ab)*")).unwrap();
    let a_star = parse_regex("a*", Some(f.output())).unwrap();
    assert!(image.equivalent(&a_star, DEFAULT_STATE_CAP).unwrap());
    // brute force: the image of every word up to length 8
    for x in enum_words(&re("(ab)*"), 8).words {
        assert!(image.accepts(&f.apply_word(&x)));
    }
}

#[test]
fn identity_transducer_is_the_identity() {
    let f = SequentialTransducer::identity(ab());
    let l = re("a(b|ab)*");
    assert!(f.apply(&l).unwrap().equivalent(&l, DEFAULT_STATE_CAP).unwrap());
    assert!(f.inverse_apply(&l).unwrap().equivalent(&l, DEFAULT_STATE_CAP).unwrap());
}

#[test]
fn run_map_of_the_two_cycle() {
    let m2 = LabelingAutomaton::build_md(2, ab()).unwrap();
    let runs = m2.run_transducer();
    let image = runs.apply(&Nfa::from_word(ab(), &w("ab"))).unwrap();
    let run = m2.run(&w("ab")).edges;
    assert_eq!(run.len(), 2);
    let words = enum_words(&image, 4).words;
    assert_eq!(words.into_iter().collect::<Vec<_>>(), vec![run]);
}

#[test]
fn inverse_images() {
    let m2 = LabelingAutomaton::build_md(2, ab()).unwrap();
    let runs = m2.run_transducer();
    let out = runs.output().clone();
    let edge: Vec<Word> = out.letters().map(|e| vec![e]).collect();
    let one = Nfa::from_words(out.clone(), &edge);
    let even_runs = one.concat(&one).unwrap().star();
    let back = runs.inverse_apply(&even_runs).unwrap();
    assert!(back.equivalent(&re("((a|b)(a|b))*"), DEFAULT_STATE_CAP).unwrap());
    assert!(runs.inverse_apply(&Nfa::universal(out)).unwrap().equivalent(&Nfa::universal(ab()), DEFAULT_STATE_CAP).unwrap());

    let f = SequentialTransducer::projection(&ab(), &[0]).unwrap();
    let two = Nfa::from_word(f.output().clone(), &[0, 0]);
    let back = f.inverse_apply(&two).unwrap();
    for x in words_up_to(2, 6) {
        assert_eq!(back.accepts(&x), x.iter().filter(|&&a| a == 0).count() == 2, "{x:?}");
    }
}

#[test]
fn labeling_runs() {
    let m2 = LabelingAutomaton::build_md(2, ab()).unwrap();
    let r = m2.run(&w("abba"));
    assert_eq!((r.edges.len(), r.sigma), (4, (0, 0)));
    assert_eq!(m2.run(&w("aba")).sigma, (0, 1));
    assert_eq!(m2.run(&[]).sigma, (0, 0));
    assert!(m2.run(&[]).edges.is_empty());
    let m3 = LabelingAutomaton::build_md(3, ab()).unwrap();
    assert_eq!(m3.run(&w("ab")).sigma, (0, 2));
    let m1 = LabelingAutomaton::build_md(1, ab()).unwrap();
    assert_eq!(m1.num_states(), 1);
    assert!(LabelingAutomaton::build_md(0, ab()).is_err());
}

#[test]
fn labeling_automata_must_be_deterministic_and_complete() {
    assert!(LabelingAutomaton::from_nfa(&re("a*")).is_err());
    let m2 = LabelingAutomaton::build_md(2, ab()).unwrap();
    let again = LabelingAutomaton::from_nfa(&m2.dfa().to_nfa()).unwrap();
    assert_eq!(again, m2);
    assert!(is_unambiguous(&m2.dfa().to_nfa()));
    assert!(!is_unambiguous(&re("a*a*")));
    assert!(is_unambiguous(&re("a*b")));
}

#[test]
fn counting_examples() {
    let p1 = CountingAutomaton::build_pk(1, ab()).unwrap();
    let x = w("ab");
    for (name, want) in [("a_a", 1), ("b_b", 1), ("c_a", 1), ("c_b", 1), ("a_b", 0), ("b_a", 0), ("a_ε", 1), ("b_ε", 1), ("c_ε", 3)] {
        assert_eq!(counter(&p1, &x, name), want, "{name}");
    }
    let empty = p1.eval(&[]);
    assert_eq!(empty, p1.final_inc(p1.initial()).iter().map(|&x| u64::from(x)).collect::<Vec<_>>());
    for (name, want) in [("a_ε", 1), ("b_ε", 1), ("c_ε", 1), ("c_a", 0)] {
        assert_eq!(counter(&p1, &[], name), want, "{name}");
    }
    let p2 = CountingAutomaton::build_pk(2, ab()).unwrap();
    assert_eq!(counter(&p2, &w("aa"), "c_aa"), 1);
    assert_eq!(counter(&p2, &w("aa"), "c_a"), 2);
    assert_eq!(counter(&p2, &w("abab"), "c_ab"), 2);
    assert!(CountingAutomaton::build_pk(0, ab()).is_err());
}

#[test]
fn counting_matches_a_scanning_oracle() {
    for k in 1..=2 {
        let p = CountingAutomaton::build_pk(k, ab()).unwrap();
        for x in words_up_to(2, 8) {
            for u in words_up_to(2, k) {
                let s = ab().format_word(&u);
                let prefix = u.len() <= x.len() && x[..u.len()] == u[..];
                let suffix = u.len() <= x.len() && x[x.len() - u.len()..] == u[..];
                assert_eq!(counter(&p, &x, &format!("a_{s}")), prefix as u64);
                assert_eq!(counter(&p, &x, &format!("b_{s}")), suffix as u64);
                assert_eq!(counter(&p, &x, &format!("c_{s}")), occurrences(&u, &x));
            }
        }
    }
}

#[test]
fn text_formats_round_trip() {
    let n = re("a(b|ab)*");
    let lines = AutomatonFile::from_nfa(&n).to_lines();
    let back = AutomatonFile::parse(&lines).unwrap().to_nfa().unwrap();
    assert_eq!(AutomatonFile::from_nfa(&back).to_lines(), lines);
    let json = AutomatonFile::from_nfa(&n).to_json();
    let back = AutomatonFile::parse(&json).unwrap().to_nfa().unwrap();
    assert_eq!(AutomatonFile::from_nfa(&back).to_json(), json);
    assert!(back.equivalent(&n, DEFAULT_STATE_CAP).unwrap());
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0usize..2, 0..=max)
}

proptest! {
    #[test]
    fn apply_then_inverse_contains_the_language(seed in any::<u64>(), keep in 0usize..3) {
        let mut rng = seeded(seed);
        let l = random_nfa(&mut rng, &ab(), 3, 0.35);
        let f = match keep {
            0 => SequentialTransducer::projection(&ab(), &[0]).unwrap(),
            1 => SequentialTransducer::identity(ab()),
            _ => LabelingAutomaton::build_md(2, ab()).unwrap().run_transducer(),
        };
        let round = f.inverse_apply(&f.apply(&l).unwrap()).unwrap();
        prop_assert!(l.is_subset_of(&round, DEFAULT_STATE_CAP).unwrap());
    }

    #[test]
    fn runs_compose(u in word(6), v in word(6), d in 1usize..4) {
        let a = LabelingAutomaton::build_md(d, ab()).unwrap();
        let ru = a.run(&u);
        let rv = a.run_from(ru.sigma.1, &v);
        let uv: Word = u.iter().chain(&v).copied().collect();
        let ruv = a.run(&uv);
        prop_assert_eq!(ruv.edges.len(), uv.len());
        prop_assert_eq!(ruv.edges, ru.edges.iter().chain(&rv.edges).copied().collect::<Word>());
        prop_assert_eq!(ruv.sigma, (ru.sigma.0, rv.sigma.1));
    }

    #[test]
    fn transducer_image_of_a_word_is_its_output(x in word(8)) {
        let f = LabelingAutomaton::build_md(3, ab()).unwrap().run_transducer();
        let image = f.apply(&Nfa::from_word(ab(), &x)).unwrap();
        prop_assert!(image.accepts(&f.apply_word(&x)));
    }
}
