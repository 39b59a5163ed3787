//! Brute-force oracles and seeded generators for cross-checking the engines.
//!
//! Nothing here calls the closure, ideal, adherence or separability code: oracles work from the
//! definitions, reading automata only through their states and edges.

use std::collections::{BTreeSet, HashSet};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::alphabet::{Alphabet, Letter, Word};
use crate::automata::{CounterAutomaton, Nfa, StateId};
use crate::orders::{Morphism, OrderSpec};

/// The words of a language up to a length bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedLanguage {
    pub alphabet: Alphabet,
    pub bound: usize,
    pub words: BTreeSet<Word>,
}

impl BoundedLanguage {
    pub fn contains(&self, w: &[Letter]) -> bool {
        self.words.contains(w)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

fn eps_closure(nfa: &Nfa, set: &BTreeSet<StateId>) -> BTreeSet<StateId> {
    let mut out = set.clone();
    let mut stack: Vec<StateId> = set.iter().copied().collect();
    while let Some(q) = stack.pop() {
        for &(l, t) in nfa.edges_from(q) {
            if l.is_none() && out.insert(t) {
                stack.push(t);
            }
        }
    }
    out
}

fn step(nfa: &Nfa, set: &BTreeSet<StateId>, a: Letter) -> BTreeSet<StateId> {
    let next = set.iter().flat_map(|&q| nfa.edges_from(q)).filter(|(l, _)| *l == Some(a)).map(|&(_, t)| t).collect();
    eps_closure(nfa, &next)
}

/// All accepted words of length at most `bound`, by walking every word and its set of reached states.
pub fn enum_words(nfa: &Nfa, bound: usize) -> BoundedLanguage {
    let sigma = nfa.alphabet().len();
    let mut words = BTreeSet::new();
    let mut layer: Vec<(Word, BTreeSet<StateId>)> = vec![(Vec::new(), eps_closure(nfa, nfa.initial()))];
    for len in 0..=bound {
        let mut next = Vec::new();
        for (w, s) in layer {
            if s.is_empty() {
                continue;
            }
            if s.iter().any(|&q| nfa.is_final(q)) {
                words.insert(w.clone());
            }
            if len < bound {
                for a in 0..sigma {
                    let mut w2 = w.clone();
                    w2.push(a);
                    next.push((w2, step(nfa, &s, a)));
                }
            }
        }
        layer = next;
    }
    BoundedLanguage { alphabet: nfa.alphabet().clone(), bound, words }
}

/// Scattered-subword test by the textbook table: `t[i][j]` says the first `i` letters of `u`
/// embed into the first `j` letters of `v`.
pub fn subword_dp(u: &[Letter], v: &[Letter]) -> bool {
    let mut t = vec![vec![false; v.len() + 1]; u.len() + 1];
    t[0].fill(true);
    for i in 1..=u.len() {
        for j in 1..=v.len() {
            t[i][j] = t[i][j - 1] || (u[i - 1] == v[j - 1] && t[i - 1][j - 1]);
        }
    }
    t[u.len()][v.len()]
}

/// `u ⊑_d v` by trying every set of positions of `v`.
pub fn mod_brute(d: usize, u: &[Letter], v: &[Letter]) -> bool {
    fn go(d: usize, u: &[Letter], v: &[Letter], i: usize, from: usize) -> bool {
        if i == u.len() {
            return true;
        }
        (from..v.len()).any(|j| v[j] == u[i] && j % d == i % d && go(d, u, v, i + 1, j + 1))
    }
    u.len() % d == v.len() % d && go(d, u, v, 0, 0)
}

/// `u ⪯_θ v` by trying every way to cut `v` into letters of `u` and inserted blocks, each block
/// fixing the image of the prefix of `u` before it and of the suffix after it.
pub fn morphism_brute(theta: &Morphism, u: &[Letter], v: &[Letter]) -> bool {
    fn go(theta: &Morphism, u: &[Letter], v: &[Letter], i: usize, j: usize) -> bool {
        if j == v.len() {
            return i == u.len();
        }
        if i < u.len() && v[j] == u[i] && go(theta, u, v, i + 1, j + 1) {
            return true;
        }
        let (pre, suf) = (theta.eval(&u[..i]), theta.eval(&u[i..]));
        (j + 1..=v.len()).any(|k| {
            let x = theta.eval(&v[j..k]);
            let m = &theta.monoid;
            m.mul(pre, x) == pre && m.mul(x, suf) == suf && go(theta, u, v, i, k)
        })
    }
    go(theta, u, v, 0, 0)
}

/// Order test used by the oracles: brute force where one is available, the order's own test otherwise.
fn oracle_leq(o: &OrderSpec, u: &[Letter], v: &[Letter]) -> bool {
    match o {
        OrderSpec::Subword(_) => subword_dp(u, v),
        OrderSpec::Mod { d, .. } => mod_brute(*d, u, v),
        OrderSpec::Morphism(theta) => morphism_brute(theta, u, v),
        _ => o.leq(u, v),
    }
}

/// Pumping slack for a witness above a word of length `n`: between two matched letters a
/// shortest witness needs at most `|Q|·d` letters.
pub fn witness_bound(o: &OrderSpec, nfa: &Nfa, n: usize) -> usize {
    let d = match o {
        OrderSpec::Subword(_) => 1,
        OrderSpec::Mod { d, .. } => *d,
        OrderSpec::Labeling(a) => a.num_states(),
        _ => 1,
    };
    n + (n + 1) * nfa.num_states() * d
}

/// Words `w` with `|w| ≤ bound` lying below some `v ∈ L` with `|v| ≤ witness_bound`.
///
/// For subword and `M_d` orders the search runs over triples (automaton state, matched prefix of
/// `w`, `|v| mod d`), one layer per letter of `v`, so witnesses of the full length are reachable
/// without listing them. A shortest witness never repeats a triple between two matched letters,
/// which gives the slack in [`witness_bound`]. Other orders compare against an explicit listing.
pub fn dcl_oracle(o: &OrderSpec, nfa: &Nfa, bound: usize) -> BoundedLanguage {
    let sigma = nfa.alphabet().len();
    let mut words = BTreeSet::new();
    let candidates: Vec<Word> = (0..=bound).flat_map(|n| all_words(sigma, n)).collect();
    match o {
        OrderSpec::Subword(_) | OrderSpec::Mod { .. } => {
            let d = if let OrderSpec::Mod { d, .. } = o { *d } else { 1 };
            let succ = successor_table(nfa);
            for w in candidates {
                if below_some_word(nfa, &succ, d, &w, witness_bound(o, nfa, w.len())) {
                    words.insert(w);
                }
            }
        }
        _ => {
            let big = enum_words(nfa, witness_bound(o, nfa, bound).min(bound + 6));
            for w in candidates {
                if big.words.iter().any(|v| oracle_leq(o, &w, v)) {
                    words.insert(w);
                }
            }
        }
    }
    BoundedLanguage { alphabet: nfa.alphabet().clone(), bound, words }
}

/// Letter successors of single states, ε-moves folded in.
fn successor_table(nfa: &Nfa) -> Vec<Vec<Vec<StateId>>> {
    (0..nfa.num_states())
        .map(|q| {
            let from = eps_closure(nfa, &BTreeSet::from([q]));
            nfa.alphabet().letters().map(|a| step(nfa, &from, a).into_iter().collect()).collect()
        })
        .collect()
}

fn below_some_word(nfa: &Nfa, succ: &[Vec<Vec<StateId>>], d: usize, w: &[Letter], max_len: usize) -> bool {
    let mut layer: HashSet<(StateId, usize)> = eps_closure(nfa, nfa.initial()).into_iter().map(|q| (q, 0)).collect();
    for len in 0..=max_len {
        if len % d == w.len() % d && layer.iter().any(|&(q, i)| i == w.len() && nfa.is_final(q)) {
            return true;
        }
        if len == max_len {
            break;
        }
        let mut next = HashSet::new();
        for &(q, i) in &layer {
            for (a, targets) in succ[q].iter().enumerate() {
                for &t in targets {
                    next.insert((t, i));
                    if i < w.len() && w[i] == a && len % d == i % d {
                        next.insert((t, i + 1));
                    }
                }
            }
        }
        if next.is_empty() {
            return false;
        }
        layer = next;
    }
    false
}

fn all_words(sigma: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|w| (0..sigma).map(move |a| [w.clone(), vec![a]].concat())).collect();
    }
    out
}

/// Whether some accepting run of at most `cap` edges raises every counter to `k` or more.
pub fn unbounded_oracle(ca: &CounterAutomaton, cap: usize, k: u32) -> bool {
    let nc = ca.num_counters();
    let mut layer: HashSet<(StateId, Vec<u32>)> = ca.initial().iter().map(|&q| (q, vec![0; nc])).collect();
    let mut seen = layer.clone();
    for steps in 0..=cap {
        if layer.iter().any(|(q, c)| ca.is_final(*q) && c.iter().all(|&x| x >= k)) {
            return true;
        }
        if steps == cap {
            break;
        }
        let mut next = HashSet::new();
        for (q, c) in &layer {
            for e in ca.edges_from(*q) {
                let c2: Vec<u32> = c.iter().zip(&e.inc).map(|(&x, &y)| (x + y).min(k)).collect();
                let s = (e.to, c2);
                if seen.insert(s.clone()) {
                    next.insert(s);
                }
            }
        }
        layer = next;
    }
    false
}

/// A random automaton with `states` states over `alphabet`, edge density `p`, one initial state.
pub fn random_nfa(rng: &mut StdRng, alphabet: &Alphabet, states: usize, p: f64) -> Nfa {
    let mut n = Nfa::new(alphabet.clone());
    let qs: Vec<StateId> = (0..states).map(|_| n.add_state()).collect();
    n.set_initial(qs[0]);
    for &q in &qs {
        n.set_final(q, rng.gen_bool(0.4));
        for a in alphabet.letters() {
            for &t in &qs {
                if rng.gen_bool(p) {
                    n.add_edge(q, Some(a), t);
                }
            }
        }
    }
    n
}

/// A random counter automaton whose edges raise each counter by 0 or 1.
pub fn random_counter_automaton(rng: &mut StdRng, alphabet: &Alphabet, states: usize, counters: usize) -> CounterAutomaton {
    let names = (0..counters).map(|i| format!("c{i}")).collect();
    let mut ca = CounterAutomaton::new(alphabet.clone(), names);
    let qs: Vec<StateId> = (0..states).map(|_| ca.add_state()).collect();
    ca.set_initial(qs[0]);
    for &q in &qs {
        ca.set_final(q, rng.gen_bool(0.4));
        for &t in &qs {
            if rng.gen_bool(0.35) {
                let a = rng.gen_range(0..alphabet.len());
                let inc = (0..counters).map(|_| u32::from(rng.gen_bool(0.4))).collect();
                ca.add_edge(q, Some(a), inc, t);
            }
        }
    }
    ca
}

pub fn seeded(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}
