//! One test per acceptance criterion. Each prints a single `criterion N PASS|FAIL` line with the
//! numbers behind it before asserting. Run with `--nocapture` to see the lines.

use wqo_core::alphabet::{words_up_to, Alphabet, Letter, Word};
use wqo_core::analysis::{
    adherence_member, association_check, counter_unbounded, downward_closure, sup_decide,
};
use wqo_core::automata::{parse_regex, Nfa, DEFAULT_STATE_CAP};
use wqo_core::ideals::{
    ideal_decompose, ideal_includes, ideal_to_nfa, in_loop_ideal, parse_ideal, pattern_irreducible, pump_pattern,
    ExtLoopPattern, IdealRep, LoopPattern,
};
use wqo_core::orders::{order_leq, OrderSpec};
use wqo_core::separability::{
    mod_bound, mod_separate, mod_separate_fixed, ptl_separate, verify_separator, SeparabilityVerdict,
};
use wqo_core::testkit::{
    dcl_oracle, mod_brute, random_counter_automaton, random_nfa, seeded, subword_dp, unbounded_oracle,
};

const BUDGET: usize = 4;

fn line(n: u32, pass: bool, detail: String) {
    println!("criterion {n} {}: {detail}", if pass { "PASS" } else { "FAIL" });
}

fn ab() -> Alphabet {
    Alphabet::from_chars("ab").unwrap()
}

fn re(s: &str) -> Nfa {
    parse_regex(s, Some(&ab())).unwrap()
}

fn m2() -> OrderSpec {
    OrderSpec::modulo(2, ab()).unwrap()
}

#[test]
fn criterion_01_subword_order_matches_table_oracle() {
    let o = OrderSpec::subword(ab());
    let words = words_up_to(2, 8);
    let mut mismatches = 0usize;
    for u in &words {
        for v in &words {
            if order_leq(&o, u, v).unwrap() != subword_dp(u, v) {
                mismatches += 1;
            }
        }
    }
    let pairs = words.len() * words.len();
    line(1, mismatches == 0, format!("{pairs} pairs, {mismatches} mismatches"));
    assert_eq!(mismatches, 0);
}

#[test]
fn criterion_02_downward_closures_match_bounded_oracle() {
    let orders = [
        OrderSpec::subword(ab()),
        OrderSpec::modulo(2, ab()).unwrap(),
        OrderSpec::modulo(3, ab()).unwrap(),
    ];
    let mut rng = seeded(0x5eed_0002);
    let mut mismatches = 0usize;
    let mut checked = 0usize;
    for i in 0..50 {
        let n = 1 + i % 4;
        let l = random_nfa(&mut rng, &ab(), n, 0.3);
        for o in &orders {
            let c = downward_closure(o, &l).unwrap();
            let oracle = dcl_oracle(o, &l, 7);
            for w in words_up_to(2, 7) {
                checked += 1;
                if c.accepts(&w) != oracle.contains(&w) {
                    mismatches += 1;
                }
            }
        }
    }
    line(2, mismatches == 0, format!("50 automata x 3 orders, {checked} memberships, {mismatches} mismatches"));
    assert_eq!(mismatches, 0);
}

#[test]
fn criterion_03_mod2_closures_of_abba_languages() {
    let o = m2();
    let even = re("((a|b)(a|b))*");
    let c1 = downward_closure(&o, &re("(aa)*(abba)*")).unwrap();
    let c2 = downward_closure(&o, &re("(abba)*")).unwrap();
    let same = c1.equivalent(&c2, DEFAULT_STATE_CAP).unwrap();
    let is_even = c1.equivalent(&even, DEFAULT_STATE_CAP).unwrap();
    line(3, same && is_even, format!("closures equivalent: {same}, equal to even-length words: {is_even}"));
    assert!(same && is_even);
}

#[test]
fn criterion_04_adherence_association_irreducibility() {
    let o = m2();
    let odd = parse_ideal(&o, "a (abba)").unwrap();
    let adh = adherence_member(&o, &odd, &re("b(a|b)*")).unwrap();
    let two = parse_ideal(&o, "(aa)(abba)").unwrap();
    let assoc = association_check(&o, &two, &re("(abba)*")).unwrap();
    let irr = pattern_irreducible(&o, &odd).unwrap();
    let pass = adh && !assoc && irr;
    line(4, pass, format!("adherence {adh} (want true), association {assoc} (want false), irreducible {irr} (want true)"));
    assert!(pass);
}

/// `w ⊑_d v^k v[..r]` for some `k`; `|w| + 1` copies are always enough.
fn in_ideal_brute(d: usize, v: &[Letter], r: usize, w: &[Letter]) -> bool {
    (0..=w.len() + 1).any(|k| {
        let mut big: Word = v.repeat(k);
        big.extend_from_slice(&v[..r]);
        mod_brute(d, w, &big)
    })
}

#[test]
fn criterion_05_kappa_characterization_brute_force() {
    let mut mismatches = 0usize;
    let mut checked = 0usize;
    let ws = words_up_to(2, 8);
    for d in [1usize, 2] {
        let o = OrderSpec::modulo(d, ab()).unwrap();
        for v in words_up_to(2, 4).into_iter().filter(|v| v.len() % d == 0) {
            let residues: Vec<usize> = if v.is_empty() { vec![0] } else { (0..d).collect() };
            for r in residues {
                let engine = if v.is_empty() {
                    None
                } else {
                    let p = LoopPattern::new(vec![vec![], vec![]], vec![v.clone()]).unwrap();
                    let e = ExtLoopPattern::new(p, vec![r], d).unwrap();
                    Some(ideal_to_nfa(&o, &IdealRep::Ext(e)).unwrap())
                };
                for w in &ws {
                    checked += 1;
                    let charact = if v.is_empty() { w.is_empty() } else { in_loop_ideal(d, &v, r, w) };
                    let brute = in_ideal_brute(d, &v, r, w);
                    let auto = engine.as_ref().map_or(brute, |n| n.accepts(w));
                    if charact != brute || auto != brute {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    line(5, mismatches == 0, format!("{checked} (d, v, r, w) cases, {mismatches} mismatches"));
    assert_eq!(mismatches, 0);
}

fn reverified(o: &OrderSpec, v: &SeparabilityVerdict, k: &Nfa, l: &Nfa) -> bool {
    match v {
        SeparabilityVerdict::Separable { formula, .. } => verify_separator(o, formula, k, l).unwrap(),
        SeparabilityVerdict::Inseparable { certificate } => {
            adherence_member(o, certificate, k).unwrap() && adherence_member(o, certificate, l).unwrap()
        }
        SeparabilityVerdict::Inconclusive { .. } => false,
    }
}

fn describe(o: &OrderSpec, v: &SeparabilityVerdict) -> String {
    match v {
        SeparabilityVerdict::Separable { formula, .. } => format!("separable by {}", formula.display(o.alphabet())),
        SeparabilityVerdict::Inseparable { certificate } => format!("inseparable, certificate {}", certificate.display(o)),
        SeparabilityVerdict::Inconclusive { budget } => format!("inconclusive at budget {budget}"),
    }
}

#[test]
fn criterion_06_separability_verdicts() {
    let sw = OrderSpec::subword(ab());
    let cases: [(&str, OrderSpec, &str, &str, bool); 4] = [
        ("i", m2(), "(aa)*", "a(aa)*", true),
        ("ii", sw.clone(), "(aa)*", "a(aa)*", false),
        ("iii", m2(), "a(abba)*", "b(abba)*", false),
        ("iv", m2(), "a(ba)*", "b(ab)*", true),
    ];
    let mut all = true;
    let mut parts = Vec::new();
    for (name, o, k, l, want_sep) in &cases {
        let (k, l) = (re(k), re(l));
        let v = ptl_separate(o, &k, &l, BUDGET).unwrap();
        let mut ok = if *want_sep { v.is_separable() } else { v.is_inseparable() } && reverified(o, &v, &k, &l);
        if *name == "ii" {
            if let SeparabilityVerdict::Inseparable { certificate } = &v {
                let a_star = parse_ideal(&sw, "(a)*").unwrap();
                ok &= ideal_includes(&sw, certificate, &a_star).unwrap() && ideal_includes(&sw, &a_star, certificate).unwrap();
            }
        }
        all &= ok;
        parts.push(format!("({name}) {}", describe(o, &v)));
    }
    line(6, all, parts.join("; "));
    assert!(all);
}

/// Stated as given. The inputs have more than one state, so d = 2 is not a multiple of the bound
/// the lifting lemma needs, and `↑₄b` separates the two languages at d = 4: every word of
/// `a(abba)*` has `a` at all positions congruent to 1 mod 4, every word of `b(abba)*` starts with `b`.
#[test]
fn criterion_07_pumping_lifts_the_mod2_certificate() {
    let o = m2();
    let (k, l) = (re("a(abba)*"), re("b(abba)*"));
    let cert = match ptl_separate(&o, &k, &l, BUDGET).unwrap() {
        SeparabilityVerdict::Inseparable { certificate: IdealRep::Ext(e) } => e,
        SeparabilityVerdict::Inseparable { certificate: IdealRep::Loop(p) } => ExtLoopPattern::from_plain(p),
        other => panic!("unexpected verdict at d = 2: {}", describe(&o, &other)),
    };
    let mut parts = Vec::new();
    let mut pass = true;
    for ell in [2usize, 3] {
        let m = k.num_states().max(l.num_states());
        let lifted_k = pump_pattern(&k, m, 2, &cert, ell);
        let lifted_l = pump_pattern(&l, m, 2, &cert, ell);
        let ok = lifted_k.is_ok() && lifted_l.is_ok();
        pass &= ok;
        parts.push(match (&lifted_k, &lifted_l) {
            (Ok(p), Ok(_)) => format!("d={} lifted to {}", 2 * ell, p.display(&ab())),
            (Err(e), _) | (_, Err(e)) => format!("d={} lift refused: {e}", 2 * ell),
        });
        let v = mod_separate_fixed(2 * ell, &k, &l, BUDGET).unwrap();
        pass &= v.is_inseparable();
        let od = OrderSpec::modulo(2 * ell, ab()).unwrap();
        parts.push(format!("mod_separate_fixed({}) {}", 2 * ell, describe(&od, &v)));
    }
    line(7, pass, parts.join("; "));
    assert!(pass, "{}", parts.join("; "));
}

fn one_state(letters: &[Letter], accepting: bool) -> Nfa {
    let mut n = Nfa::new(ab());
    let q = n.add_state();
    n.set_initial(q);
    n.set_final(q, accepting);
    for &a in letters {
        n.add_edge(q, Some(a), q);
    }
    n
}

#[test]
fn criterion_08_bound_and_definitive_search() {
    let b1 = mod_bound(1).to_string();
    let b2 = mod_bound(2).to_string();
    let mut pass = b1 == "2" && b2 == "80640";
    let mut parts = vec![format!("mod_bound(1) = {b1}, mod_bound(2) = {b2}")];
    let inputs = [("a* vs b*", one_state(&[0], true), one_state(&[1], true)), ("∅ vs a*", one_state(&[], false), one_state(&[0], true))];
    for (name, k, l) in &inputs {
        let r = mod_separate(k, l, 64, BUDGET).unwrap();
        let fixed = mod_separate_fixed(2, k, l, BUDGET).unwrap();
        let agree = r.verdict.is_separable() == fixed.is_separable() && r.verdict.is_inseparable() == fixed.is_inseparable();
        let ok = r.definitive && r.d_used == 2 && agree && !fixed.is_inconclusive();
        pass &= ok;
        parts.push(format!("{name}: d_used {} definitive {} {}", r.d_used, r.definitive, describe(&m2(), &r.verdict)));
    }
    line(8, pass, parts.join("; "));
    assert!(pass);
}

#[test]
fn criterion_09_unboundedness_matches_run_search() {
    let mut rng = seeded(0x5eed_0009);
    let mut mismatches = Vec::new();
    let mut unbounded = 0;
    for i in 0..200 {
        let states = 1 + i % 4;
        let counters = 1 + (i / 4) % 3;
        let ca = random_counter_automaton(&mut rng, &ab(), states, counters);
        let engine = counter_unbounded(&ca, None).unwrap().unbounded;
        let oracle = unbounded_oracle(&ca, 20, 4);
        unbounded += usize::from(engine);
        if engine != oracle {
            mismatches.push(i);
        }
    }
    line(9, mismatches.is_empty(), format!("200 automata, {unbounded} unbounded, mismatches at {mismatches:?}"));
    assert!(mismatches.is_empty());
}

#[test]
fn criterion_10_simultaneous_unboundedness() {
    let abc = Alphabet::from_chars("abc").unwrap();
    let mut parts = Vec::new();
    let mut pass = true;
    for (src, n) in [("a*", 1usize), ("a*b*", 2), ("a*b*c*", 3)] {
        let l = parse_regex(src, Some(&abc)).unwrap();
        let letters: Vec<Letter> = (0..n).collect();
        let r = sup_decide(&l, &letters).unwrap();
        pass &= r;
        parts.push(format!("{src}: {r}"));
    }
    let r = sup_decide(&re("a*b"), &[0, 1]).unwrap();
    pass &= !r;
    parts.push(format!("a*b in a*b*: {r}"));
    line(10, pass, parts.join(", "));
    assert!(pass);
}

#[test]
fn criterion_11_decompositions_cover_and_are_antichains() {
    let mut rng = seeded(0x5eed_0011);
    let mut failures = Vec::new();
    let mut members = 0;
    for i in 0..20 {
        let o = if i % 2 == 0 { OrderSpec::subword(ab()) } else { m2() };
        let l = downward_closure(&o, &random_nfa(&mut rng, &ab(), 1 + i % 4, 0.3)).unwrap();
        let parts = ideal_decompose(&o, &l).unwrap();
        members += parts.len();
        let mut union = Nfa::empty(ab());
        for p in &parts {
            union = union.union(&ideal_to_nfa(&o, p).unwrap()).unwrap();
        }
        let covers = union.equivalent(&l, DEFAULT_STATE_CAP).unwrap();
        let antichain = parts.iter().enumerate().all(|(x, p)| {
            parts.iter().enumerate().all(|(y, q)| x == y || !ideal_includes(&o, p, q).unwrap())
        });
        if !(covers && antichain) {
            failures.push(i);
        }
    }
    line(11, failures.is_empty(), format!("20 closed inputs, {members} ideals in total, failures at {failures:?}"));
    assert!(failures.is_empty());
}
