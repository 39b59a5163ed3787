use std::collections::{HashMap, VecDeque};

use crate::automata::{LabelingAutomaton, Nfa, StateId, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::ideals::{enumerate_ideals, ideal_includes, ideal_to_nfa, IdealRep};
use crate::orders::OrderSpec;

use super::adherence::adherence_member;

/// Default ideal budget for conjunction closures.
pub const DEFAULT_CLOSURE_BUDGET: usize = 4;

/// Automaton for `↓_o L`.
pub fn downward_closure(o: &OrderSpec, l: &Nfa) -> Result<Nfa> {
    downward_closure_with_budget(o, l, DEFAULT_CLOSURE_BUDGET)
}

/// As [`downward_closure`]; conjunctions search ideal unions up to `budget` and report
/// [`Error::Inconclusive`] when that is not enough.
pub fn downward_closure_with_budget(o: &OrderSpec, l: &Nfa, budget: usize) -> Result<Nfa> {
    l.alphabet().ensure_same(o.alphabet())?;
    match o {
        OrderSpec::Subword(_) => Ok(subword_downward(l)),
        OrderSpec::Via { f, inner } => f.inverse_apply(&downward_closure_with_budget(inner, &f.apply(l)?, budget)?),
        OrderSpec::Labeling(a) | OrderSpec::Mod { automaton: a, .. } => Ok(labeling_downward(a, l)),
        OrderSpec::Conj(_) => conj_downward(o, l, budget).map(|(n, _)| n),
        OrderSpec::Counting(_) => {
            downward_closure_with_budget(&o.conjunction_encoding().expect("counting order"), l, budget)
        }
        OrderSpec::Morphism(_) => Err(Error::Unsupported("downward closures of morphism orders".into())),
    }
}

/// Automaton for `↑_o L`.
pub fn upward_closure(o: &OrderSpec, l: &Nfa) -> Result<Nfa> {
    l.alphabet().ensure_same(o.alphabet())?;
    match o {
        OrderSpec::Subword(_) => {
            let mut n = l.clone();
            for q in 0..n.num_states() {
                for a in o.alphabet().letters() {
                    n.add_edge(q, Some(a), q);
                }
            }
            Ok(n)
        }
        OrderSpec::Via { f, inner } => f.inverse_apply(&upward_closure(inner, &f.apply(l)?)?),
        OrderSpec::Labeling(a) | OrderSpec::Mod { automaton: a, .. } => Ok(labeling_upward(a, l)),
        OrderSpec::Conj(_) => Err(Error::Unsupported("upward closures of languages under conjunctions".into())),
        OrderSpec::Counting(_) => Err(Error::Unsupported("upward closures of languages under counting orders".into())),
        OrderSpec::Morphism(_) => Err(Error::Unsupported("upward closures of morphism orders".into())),
    }
}

/// Every letter edge gains an ε twin.
fn subword_downward(l: &Nfa) -> Nfa {
    let mut n = l.clone();
    for q in 0..n.num_states() {
        let extra: Vec<StateId> = n.edges_from(q).iter().filter(|(x, _)| x.is_some()).map(|&(_, r)| r).collect();
        for r in extra {
            n.add_edge(q, None, r);
        }
    }
    n.trim()
}

/// Reads `u` while guessing `v ∈ L` with `σ(u) = σ(v)` and `run(u) ⊑ run(v)`. A state `(p, s, t)` holds
/// the state `p` of `L` and the states `s`, `t` of the labeling automaton after the guessed prefix of `v`
/// and after the read prefix of `u`. Skipping a letter of `v` moves `p` and `s`; keeping one needs the
/// same edge in both runs, so `s = t`.
fn labeling_downward(a: &LabelingAutomaton, l: &Nfa) -> Nfa {
    let l = l.remove_epsilon().trim();
    let q0 = a.initial();
    let mut out = Nfa::new(l.alphabet().clone());
    let mut index: HashMap<(StateId, StateId, StateId), StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |out: &mut Nfa, queue: &mut VecDeque<(StateId, StateId, StateId)>, key: (StateId, StateId, StateId)| {
        *index.entry(key).or_insert_with(|| {
            let id = out.add_state();
            out.set_final(id, l.is_final(key.0) && key.1 == key.2);
            queue.push_back(key);
            id
        })
    };
    for &p in l.initial() {
        let id = intern(&mut out, &mut queue, (p, q0, q0));
        out.set_initial(id);
    }
    while let Some((p, s, t)) = queue.pop_front() {
        let src = intern(&mut out, &mut queue, (p, s, t));
        for &(x, p2) in l.edges_from(p) {
            let x = x.expect("ε-free");
            let s2 = a.next(s, x);
            let skip = intern(&mut out, &mut queue, (p2, s2, t));
            out.add_edge(src, None, skip);
            if s == t {
                let keep = intern(&mut out, &mut queue, (p2, s2, s2));
                out.add_edge(src, Some(x), keep);
            }
        }
    }
    out.trim()
}

/// Reads `v` while guessing `u ∈ L` with `σ(u) = σ(v)` and `run(u) ⊑ run(v)`: `(p, s, t)` holds the state
/// of `L` on the guessed `u`, the labeling state after the read prefix of `v`, and the labeling state
/// after the guessed prefix of `u`. Letters of `v` are either inserted (only `s` moves) or matched.
fn labeling_upward(a: &LabelingAutomaton, l: &Nfa) -> Nfa {
    let l = l.remove_epsilon().trim();
    let q0 = a.initial();
    let mut out = Nfa::new(l.alphabet().clone());
    let mut index: HashMap<(StateId, StateId, StateId), StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |out: &mut Nfa, queue: &mut VecDeque<(StateId, StateId, StateId)>, key: (StateId, StateId, StateId)| {
        *index.entry(key).or_insert_with(|| {
            let id = out.add_state();
            out.set_final(id, l.is_final(key.0) && key.1 == key.2);
            queue.push_back(key);
            id
        })
    };
    for &p in l.initial() {
        let id = intern(&mut out, &mut queue, (p, q0, q0));
        out.set_initial(id);
    }
    while let Some((p, s, t)) = queue.pop_front() {
        let src = intern(&mut out, &mut queue, (p, s, t));
        for x in a.alphabet().letters() {
            let ins = intern(&mut out, &mut queue, (p, a.next(s, x), t));
            out.add_edge(src, Some(x), ins);
        }
        if s == t {
            for &(x, p2) in l.edges_from(p) {
                let x = x.expect("ε-free");
                let s2 = a.next(s, x);
                let m = intern(&mut out, &mut queue, (p2, s2, s2));
                out.add_edge(src, Some(x), m);
            }
        }
    }
    out.trim()
}

/// The ideal-union search for conjunctions: collect the valid ideals up to `budget` that lie in
/// `Adh(L)`; they are all below `↓L`, so once their union covers `L` it equals `↓L`.
/// Returns the closure and its ⊆-maximal ideals.
pub fn conj_downward(o: &OrderSpec, l: &Nfa, budget: usize) -> Result<(Nfa, Vec<IdealRep>)> {
    let candidates = enumerate_ideals(o, budget, &[l])?;
    let mut members = Vec::new();
    for i in candidates {
        if adherence_member(o, &i, l)? {
            members.push(i);
        }
    }
    let mut maximal: Vec<IdealRep> = Vec::new();
    for (k, i) in members.iter().enumerate() {
        let mut dominated = false;
        for (j, other) in members.iter().enumerate() {
            if j != k && ideal_includes(o, i, other)? && (!ideal_includes(o, other, i)? || j < k) {
                dominated = true;
                break;
            }
        }
        if !dominated {
            maximal.push(i.clone());
        }
    }
    let mut union = Nfa::empty(o.alphabet().clone());
    for i in &maximal {
        union = union.union(&ideal_to_nfa(o, i)?)?;
    }
    if l.is_subset_of(&union, DEFAULT_STATE_CAP)? {
        Ok((union.trim(), maximal))
    } else {
        Err(Error::Inconclusive(budget))
    }
}
