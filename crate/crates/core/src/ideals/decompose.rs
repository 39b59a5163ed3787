use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::alphabet::{words_up_to, Letter, Word};
use crate::automata::{Dfa, LabelingAutomaton, Nfa, StateId, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::orders::OrderSpec;

use super::kappa::kappa;
use super::{ideal_equal, ideal_includes, ideal_to_nfa, loop_to_subword, IdealRep, LoopPattern};

/// Upper bound on the number of raw patterns produced by the path enumeration.
const PATTERN_CAP: usize = 50_000;

/// Looks for a word `w ∈ L` with `|w| ≤ max_len` and some `u ⪯ w` outside `L`; returns the pair.
pub fn sample_downward_closed(o: &OrderSpec, l: &Nfa, max_len: usize) -> Result<Option<(Word, Word)>> {
    l.alphabet().ensure_same(o.alphabet())?;
    let words = words_up_to(o.alphabet().len(), max_len);
    let accepted: Vec<&Word> = words.iter().filter(|w| l.accepts(w)).collect();
    for w in &accepted {
        for u in words.iter().filter(|u| u.len() <= w.len()) {
            if o.leq(u, w) && !l.accepts(u) {
                return Ok(Some((u.clone(), (*w).clone())));
            }
        }
    }
    Ok(None)
}

/// Splits a downward-closed `L` into ⊆-maximal ideals whose union is `L`.
///
/// The product of the minimal automaton of `L` with the labeling automaton is deterministic, and its
/// cycles are cycles of the labeling automaton. Every accepting run follows a path through the
/// component graph and, inside each component, reduces to a simple path by erasing closed walks. Each
/// such skeleton gives the pattern that inserts, at every visited state of a non-trivial component, a
/// loop word traversing all edges of that component; its ideal contains every run with that skeleton.
pub fn ideal_decompose(o: &OrderSpec, l: &Nfa) -> Result<Vec<IdealRep>> {
    l.alphabet().ensure_same(o.alphabet())?;
    let host = match o {
        OrderSpec::Subword(a) => LabelingAutomaton::build_md(1, a.clone())?,
        OrderSpec::Labeling(a) | OrderSpec::Mod { automaton: a, .. } => a.clone(),
        _ => return Err(Error::Unsupported(format!("ideal decomposition under {o}"))),
    };
    if let Some((u, w)) = sample_downward_closed(o, l, 4)? {
        return Err(Error::Precondition(format!(
            "language is not downward closed: {} is below {} but rejected",
            o.alphabet().format_word(&u),
            o.alphabet().format_word(&w)
        )));
    }
    let dfa = l.determinize(DEFAULT_STATE_CAP)?.minimize();
    let product = Product::build(&dfa, &host);
    let raw = product.patterns()?;

    let as_rep = |p: LoopPattern| match o {
        OrderSpec::Subword(_) => IdealRep::Subword(loop_to_subword(&p).normalize()),
        _ => IdealRep::Loop(p),
    };
    let mut unique: Vec<IdealRep> = raw.into_iter().map(|p| simplify(o, p).map(as_rep)).collect::<Result<BTreeSet<_>>>()?.into_iter().collect();
    // fewer loops first keeps the survivors small
    unique.sort_by_key(|i| match i {
        IdealRep::Loop(p) => (p.num_loops(), p.connectors.iter().map(Vec::len).sum::<usize>()),
        IdealRep::Subword(s) => (s.num_stars(), s.atoms.len()),
        _ => (0, 0),
    });
    unique.reverse();
    let mut kept: Vec<IdealRep> = Vec::new();
    for i in unique {
        let mut covered = false;
        for j in &kept {
            if ideal_includes(o, &i, j)? {
                covered = true;
                break;
            }
        }
        if covered {
            continue;
        }
        let mut survivors = Vec::with_capacity(kept.len() + 1);
        for j in kept {
            if !ideal_includes(o, &j, &i)? {
                survivors.push(j);
            }
        }
        survivors.push(i);
        kept = survivors;
    }
    let mut union = Nfa::empty(o.alphabet().clone());
    for i in &kept {
        union = union.union(&ideal_to_nfa(o, i)?)?;
    }
    if !union.equivalent(l, DEFAULT_STATE_CAP)? {
        return Err(Error::Precondition("language is not downward closed: the ideal union differs from it".into()));
    }
    kept.sort();
    Ok(kept)
}

/// Drops loops one at a time while the ideal stays the same.
fn simplify(o: &OrderSpec, p: LoopPattern) -> Result<LoopPattern> {
    let mut cur = p;
    'outer: loop {
        let whole = IdealRep::Loop(cur.clone());
        for i in 0..cur.num_loops() {
            let q = cur.drop_loop(i);
            if ideal_includes(o, &whole, &IdealRep::Loop(q.clone()))? {
                cur = q;
                continue 'outer;
            }
        }
        break;
    }
    // Connector factors the loops already cover can go; under M_d they are removed d letters at a time.
    let window = match o {
        OrderSpec::Mod { d, .. } => *d,
        OrderSpec::Labeling(a) => a.num_states(),
        _ => 1,
    };
    for i in 0..cur.connectors.len() {
        let mut j = 0;
        while j < cur.connectors[i].len() {
            let mut removed = false;
            for len in 1..=window.min(cur.connectors[i].len() - j) {
                let mut q = cur.clone();
                q.connectors[i].drain(j..j + len);
                let valid = match o {
                    OrderSpec::Labeling(a) => q.validate_for_labeling(a).is_ok(),
                    _ => true,
                };
                if valid && ideal_equal(o, &IdealRep::Loop(cur.clone()), &IdealRep::Loop(q.clone()))? {
                    cur = q;
                    removed = true;
                    break;
                }
            }
            if !removed {
                j += 1;
            }
        }
    }
    // Under M_d a loop matters only through its residue profile; prefer the profile's canonical word.
    if let OrderSpec::Mod { d, .. } = o {
        for i in 0..cur.num_loops() {
            let Some(c) = kappa(*d, &cur.loops[i]).canonical_word() else { continue };
            if c != cur.loops[i] {
                let mut q = cur.clone();
                q.loops[i] = c;
                if ideal_equal(o, &IdealRep::Loop(cur.clone()), &IdealRep::Loop(q.clone()))? {
                    cur = q;
                }
            }
        }
    }
    Ok(cur)
}

/// The reachable, co-reachable part of `D × A`.
struct Product {
    k: usize,
    delta: Vec<Option<StateId>>,
    finals: Vec<bool>,
    comp: Vec<usize>,
    nontrivial: Vec<bool>,
    loops: Vec<Option<Word>>,
}

impl Product {
    fn build(dfa: &Dfa, host: &LabelingAutomaton) -> Product {
        let k = dfa.alphabet().len();
        let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut pairs = vec![(dfa.initial(), host.initial())];
        index.insert(pairs[0], 0);
        let mut raw: Vec<StateId> = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (x, s) = pairs[i];
            for a in 0..k {
                let key = (dfa.next(x, a), host.next(s, a));
                let id = *index.entry(key).or_insert_with(|| {
                    pairs.push(key);
                    pairs.len() - 1
                });
                raw.push(id);
            }
            i += 1;
        }
        let n = pairs.len();
        let finals: Vec<bool> = pairs.iter().map(|&(x, _)| dfa.is_final(x)).collect();
        // co-reachability
        let mut live = finals.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for q in 0..n {
                if !live[q] && (0..k).any(|a| live[raw[q * k + a]]) {
                    live[q] = true;
                    changed = true;
                }
            }
        }
        let delta: Vec<Option<StateId>> = raw.iter().map(|&t| live[t].then_some(t)).collect();
        let mut p = Product { k, delta, finals, comp: Vec::new(), nontrivial: Vec::new(), loops: Vec::new() };
        if !live[0] {
            p.finals = vec![false; n];
        }
        p.comp = p.components(&live);
        p.nontrivial = (0..n)
            .map(|q| live[q] && (0..k).any(|a| p.delta[q * k + a].is_some_and(|t| p.comp[t] == p.comp[q])))
            .collect();
        p.loops = (0..n).map(|q| p.nontrivial[q].then(|| p.loop_word(q))).collect();
        p
    }

    fn succ(&self, q: StateId) -> impl Iterator<Item = (Letter, StateId)> + '_ {
        (0..self.k).filter_map(move |a| self.delta[q * self.k + a].map(|t| (a, t)))
    }

    /// Component ids via mutual reachability (the product is small).
    fn components(&self, live: &[bool]) -> Vec<usize> {
        let n = live.len();
        let reach: Vec<Vec<bool>> = (0..n)
            .map(|s| {
                let mut seen = vec![false; n];
                let mut stack = vec![s];
                seen[s] = true;
                while let Some(q) = stack.pop() {
                    for (_, t) in self.succ(q) {
                        if !seen[t] {
                            seen[t] = true;
                            stack.push(t);
                        }
                    }
                }
                seen
            })
            .collect();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        for q in 0..n {
            if comp[q] != usize::MAX {
                continue;
            }
            for t in 0..n {
                if reach[q][t] && reach[t][q] {
                    comp[t] = next;
                }
            }
            next += 1;
        }
        comp
    }

    /// Shortest word leading from `from` to `to` inside their common component.
    fn path(&self, from: StateId, to: StateId) -> Word {
        let c = self.comp[from];
        let mut prev: HashMap<StateId, (StateId, Letter)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = BTreeSet::from([from]);
        while let Some(q) = queue.pop_front() {
            if q == to {
                break;
            }
            for (a, t) in self.succ(q) {
                if self.comp[t] == c && seen.insert(t) {
                    prev.insert(t, (q, a));
                    queue.push_back(t);
                }
            }
        }
        let mut w = Vec::new();
        let mut cur = to;
        while cur != from {
            let (p, a) = prev[&cur];
            w.push(a);
            cur = p;
        }
        w.reverse();
        w
    }

    /// A closed walk at `q` using every edge of its component.
    fn loop_word(&self, q: StateId) -> Word {
        let c = self.comp[q];
        let mut w = Vec::new();
        for x in (0..self.comp.len()).filter(|&x| self.comp[x] == c) {
            for (a, y) in self.succ(x) {
                if self.comp[y] == c {
                    w.extend(self.path(q, x));
                    w.push(a);
                    w.extend(self.path(y, q));
                }
            }
        }
        w
    }

    fn patterns(&self) -> Result<Vec<LoopPattern>> {
        let mut out = Vec::new();
        if self.delta.is_empty() || !self.finals.iter().any(|&f| f) {
            return Ok(out);
        }
        let mut connectors = vec![Vec::new()];
        let mut loops = Vec::new();
        let mut visited = BTreeSet::from([0]);
        self.walk(0, &mut visited, &mut connectors, &mut loops, &mut out)?;
        Ok(out)
    }

    fn walk(
        &self,
        q: StateId,
        visited: &mut BTreeSet<StateId>,
        connectors: &mut Vec<Word>,
        loops: &mut Vec<Word>,
        out: &mut Vec<LoopPattern>,
    ) -> Result<()> {
        if out.len() > PATTERN_CAP {
            return Err(Error::StateCap { cap: PATTERN_CAP, during: "ideal decomposition" });
        }
        let pushed = if let Some(v) = &self.loops[q] {
            loops.push(v.clone());
            connectors.push(Vec::new());
            true
        } else {
            false
        };
        if self.finals[q] {
            out.push(LoopPattern { connectors: connectors.clone(), loops: loops.clone() });
        }
        for (a, t) in self.succ(q) {
            let same = self.comp[t] == self.comp[q];
            if same && visited.contains(&t) {
                continue;
            }
            connectors.last_mut().expect("non-empty").push(a);
            if same {
                visited.insert(t);
                self.walk(t, visited, connectors, loops, out)?;
                visited.remove(&t);
            } else {
                let mut fresh = BTreeSet::from([t]);
                self.walk(t, &mut fresh, connectors, loops, out)?;
            }
            connectors.last_mut().expect("non-empty").pop();
        }
        if pushed {
            loops.pop();
            connectors.pop();
        }
        Ok(())
    }
}
