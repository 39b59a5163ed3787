use proptest::prelude::*;

use wqo_core::alphabet::{Alphabet, Word};
use wqo_core::ideals::{
    d_embedding, divisors, ideal_equal, in_loop_ideal, kappa, make_extended_irreducible, pattern_irreducible, period,
    rotate, Direction, ExtLoopPattern, IdealRep, LoopPattern,
};
use wqo_core::orders::OrderSpec;
use wqo_core::testkit::mod_brute;

fn ab() -> Alphabet {
    Alphabet::from_chars("ab").unwrap()
}

fn w(s: &str) -> Word {
    ab().parse_word(s).unwrap()
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0usize..2, 0..=max)
}

/// A non-empty loop word whose length is a multiple of `d`.
fn loop_word(d: usize, blocks: usize) -> impl Strategy<Value = Word> {
    (1..=blocks).prop_flat_map(move |k| prop::collection::vec(0usize..2, k * d))
}

/// `w ∈ ↓_d v^{[r]}` by searching embeddings into `v^k` followed by the first `r` letters of `v`;
/// one copy of `v` per letter of `w` is always enough.
fn in_ideal_brute(d: usize, v: &[usize], r: usize, x: &[usize]) -> bool {
    (0..=x.len() + 1).any(|k| {
        let mut host: Word = v.iter().copied().cycle().take(k * v.len()).collect();
        host.extend_from_slice(&v[..r]);
        mod_brute(d, x, &host)
    })
}

#[test]
fn periods() {
    assert_eq!(period(2, &w("abab")), 2);
    assert_eq!(period(2, &w("aaaa")), 1);
    assert_eq!(period(4, &w("aabb")), 4);
    assert_eq!(period(4, &w("abab")), 2);
    assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
}

#[test]
fn rotations() {
    assert_eq!(rotate(&w("abb"), Direction::Right, 1), w("bab"));
    assert_eq!(rotate(&w("abb"), Direction::Left, 1), w("bba"));
    assert_eq!(rotate(&w("abb"), Direction::Left, 3), w("abb"));
    assert!(rotate(&[], Direction::Right, 2).is_empty());
}

#[test]
fn profiles() {
    let k = kappa(2, &w("abba"));
    assert!(k.is_full_support());
    assert_eq!(k.at(0).len(), 2);
    assert!(kappa(2, &w("aa")).is_subset_of(&k));
    assert!(!kappa(2, &w("a")).is_full_support());
    let c = kappa(2, &w("abba")).canonical_word().unwrap();
    assert_eq!(kappa(2, &c), k);
}

#[test]
fn extended_irreducible_keeps_the_ideal() {
    let o = OrderSpec::modulo(2, ab()).unwrap();
    let p = ExtLoopPattern::new(LoopPattern::new(vec![w("a"), w(""), w("")], vec![w("ab"), w("abab")]).unwrap(), vec![0, 0], 2).unwrap();
    let q = make_extended_irreducible(&o, &p, 2).unwrap();
    assert!(ideal_equal(&o, &IdealRep::Ext(p), &IdealRep::Ext(q.clone())).unwrap());
    assert!(pattern_irreducible(&o, &IdealRep::Ext(q.clone())).unwrap());
    assert_eq!(q.num_loops(), 1);
}

proptest! {
    #[test]
    fn d_embedding_decides_the_mod_order(u in word(7), v in word(7), d in 1usize..4) {
        let e = d_embedding(d, &u, &v);
        prop_assert_eq!(e.is_some(), mod_brute(d, &u, &v));
        if let Some(map) = e {
            prop_assert_eq!(map.len(), u.len());
            for (i, &j) in map.iter().enumerate() {
                prop_assert_eq!(v[j - 1], u[i]);
                prop_assert_eq!((j - 1) % d, i % d);
            }
            prop_assert!(map.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn loop_ideal_characterization((d, v) in (1usize..3).prop_flat_map(|d| (Just(d), loop_word(d, 4 / d))), x in word(8)) {
        for r in 0..d {
            prop_assert_eq!(in_loop_ideal(d, &v, r, &x), in_ideal_brute(d, &v, r, &x));
        }
    }

    #[test]
    fn inserting_a_periodic_block((d, v) in (1usize..5).prop_flat_map(|d| (Just(d), loop_word(d, 2))), x in word(5), y in word(8), z in word(5)) {
        let t = period(d, &v);
        prop_assume!(y.len() % t == 0);
        let kv = kappa(d, &v);
        let xyz: Word = [&x[..], &y, &z].concat();
        if kappa(d, &xyz).is_subset_of(&kv) {
            let xyyz: Word = [&x[..], &y, &y, &z].concat();
            prop_assert!(kappa(d, &xyyz).is_subset_of(&kv));
        }
    }

    #[test]
    fn pumping_inside_a_loop_ideal((d, v) in (1usize..5).prop_flat_map(|d| (Just(d), loop_word(d, 2))), x in word(4), y in word(4), z in word(4), ell in 1usize..3) {
        prop_assume!(!y.is_empty() && y.len() % period(d, &v) == 0 && d % y.len() == 0);
        let xyz: Word = [&x[..], &y, &z].concat();
        let r = xyz.len() % d;
        if in_loop_ideal(d, &v, r, &xyz) {
            let reps = 1 + ell * d / y.len();
            let mut pumped = x.clone();
            for _ in 0..reps {
                pumped.extend_from_slice(&y);
            }
            pumped.extend_from_slice(&z);
            prop_assert!(in_loop_ideal(d, &v, r, &pumped));
        }
    }
}
