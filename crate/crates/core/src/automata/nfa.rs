use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::alphabet::{Alphabet, Letter, Word};
use crate::automata::dfa::Dfa;
use crate::error::{Error, Result};

pub type StateId = usize;

/// Default bound on the number of subset states built by determinization.
pub const DEFAULT_STATE_CAP: usize = 1 << 16;

/// A nondeterministic automaton with ε-edges (label `None`).
#[derive(Clone, Debug)]
pub struct Nfa {
    alphabet: Alphabet,
    names: Vec<String>,
    edges: Vec<Vec<(Option<Letter>, StateId)>>,
    initial: BTreeSet<StateId>,
    finals: Vec<bool>,
}

impl Nfa {
    /// An automaton with no states; its language is empty.
    pub fn new(alphabet: Alphabet) -> Self {
        Self { alphabet, names: Vec::new(), edges: Vec::new(), initial: BTreeSet::new(), finals: Vec::new() }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.edges.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn add_state(&mut self) -> StateId {
        let id = self.edges.len();
        self.add_named_state(format!("q{id}"))
    }

    pub fn add_named_state(&mut self, name: String) -> StateId {
        let id = self.edges.len();
        self.edges.push(Vec::new());
        self.finals.push(false);
        self.names.push(name);
        id
    }

    pub fn add_edge(&mut self, from: StateId, label: Option<Letter>, to: StateId) {
        debug_assert!(label.is_none_or(|a| a < self.alphabet.len()));
        if !self.edges[from].contains(&(label, to)) {
            self.edges[from].push((label, to));
        }
    }

    pub fn set_initial(&mut self, q: StateId) {
        self.initial.insert(q);
    }

    pub fn set_final(&mut self, q: StateId, is_final: bool) {
        self.finals[q] = is_final;
    }

    pub fn initial(&self) -> &BTreeSet<StateId> {
        &self.initial
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(|&q| self.finals[q])
    }

    pub fn edges_from(&self, q: StateId) -> &[(Option<Letter>, StateId)] {
        &self.edges[q]
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn set_name(&mut self, q: StateId, name: String) {
        self.names[q] = name;
    }

    pub fn has_epsilon(&self) -> bool {
        self.edges.iter().flatten().any(|(l, _)| l.is_none())
    }

    /// `{w}`.
    pub fn from_word(alphabet: Alphabet, w: &[Letter]) -> Self {
        let mut n = Nfa::new(alphabet);
        let mut q = n.add_state();
        n.set_initial(q);
        for &a in w {
            let r = n.add_state();
            n.add_edge(q, Some(a), r);
            q = r;
        }
        n.set_final(q, true);
        n
    }

    /// `Γ*` for the given letters.
    pub fn star_of(alphabet: Alphabet, letters: &[Letter]) -> Self {
        let mut n = Nfa::new(alphabet);
        let q = n.add_state();
        n.set_initial(q);
        n.set_final(q, true);
        for &a in letters {
            n.add_edge(q, Some(a), q);
        }
        n
    }

    /// `Σ*`.
    pub fn universal(alphabet: Alphabet) -> Self {
        let letters: Vec<Letter> = alphabet.letters().collect();
        Self::star_of(alphabet, &letters)
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Nfa::new(alphabet)
    }

    /// Finite language of the given words.
    pub fn from_words(alphabet: Alphabet, words: &[Word]) -> Self {
        let mut n = Nfa::new(alphabet.clone());
        for w in words {
            n = n.union(&Nfa::from_word(alphabet.clone(), w)).expect("same alphabet");
        }
        n
    }

    fn closure_into(&self, set: &mut BTreeSet<StateId>) {
        let mut stack: Vec<StateId> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &(l, r) in &self.edges[q] {
                if l.is_none() && set.insert(r) {
                    stack.push(r);
                }
            }
        }
    }

    /// ε-closure of a state set.
    pub fn closure(&self, set: &BTreeSet<StateId>) -> BTreeSet<StateId> {
        let mut s = set.clone();
        self.closure_into(&mut s);
        s
    }

    /// Successors on `a` followed by ε-closure.
    pub fn step(&self, set: &BTreeSet<StateId>, a: Letter) -> BTreeSet<StateId> {
        let mut out = BTreeSet::new();
        for &q in set {
            for &(l, r) in &self.edges[q] {
                if l == Some(a) {
                    out.insert(r);
                }
            }
        }
        self.closure_into(&mut out);
        out
    }

    pub fn initial_closure(&self) -> BTreeSet<StateId> {
        self.closure(&self.initial)
    }

    /// States reached after reading `w` from the initial states.
    pub fn run_set(&self, w: &[Letter]) -> BTreeSet<StateId> {
        let mut cur = self.initial_closure();
        for &a in w {
            cur = self.step(&cur, a);
        }
        cur
    }

    pub fn accepts(&self, w: &[Letter]) -> bool {
        self.run_set(w).iter().any(|&q| self.finals[q])
    }

    /// Equivalent automaton without ε-edges over the same states.
    pub fn remove_epsilon(&self) -> Nfa {
        if !self.has_epsilon() {
            return self.clone();
        }
        let mut out = Nfa::new(self.alphabet.clone());
        for q in 0..self.num_states() {
            out.add_named_state(self.names[q].clone());
        }
        for q in 0..self.num_states() {
            let cl = self.closure(&BTreeSet::from([q]));
            for &p in &cl {
                if self.finals[p] {
                    out.finals[q] = true;
                }
                for &(l, r) in &self.edges[p] {
                    if let Some(a) = l {
                        out.add_edge(q, Some(a), r);
                    }
                }
            }
        }
        out.initial = self.initial.clone();
        out
    }

    fn forward_reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<StateId> = self.initial.iter().copied().collect();
        for &q in &stack {
            seen[q] = true;
        }
        while let Some(q) = stack.pop() {
            for &(_, r) in &self.edges[q] {
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
        seen
    }

    fn backward_reachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for q in 0..n {
            for &(_, r) in &self.edges[q] {
                rev[r].push(q);
            }
        }
        let mut seen = self.finals.clone();
        let mut stack: Vec<StateId> = (0..n).filter(|&q| seen[q]).collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Restriction to states that are reachable and co-reachable.
    pub fn trim(&self) -> Nfa {
        let fw = self.forward_reachable();
        let bw = self.backward_reachable();
        let keep: Vec<bool> = (0..self.num_states()).map(|q| fw[q] && bw[q]).collect();
        self.restrict_states(&keep)
    }

    fn restrict_states(&self, keep: &[bool]) -> Nfa {
        let mut map = vec![usize::MAX; self.num_states()];
        let mut out = Nfa::new(self.alphabet.clone());
        for q in 0..self.num_states() {
            if keep[q] {
                map[q] = out.add_named_state(self.names[q].clone());
                out.finals[map[q]] = self.finals[q];
            }
        }
        for q in 0..self.num_states() {
            if !keep[q] {
                continue;
            }
            for &(l, r) in &self.edges[q] {
                if keep[r] {
                    out.add_edge(map[q], l, map[r]);
                }
            }
        }
        for &q in &self.initial {
            if keep[q] {
                out.initial.insert(map[q]);
            }
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        let fw = self.forward_reachable();
        !(0..self.num_states()).any(|q| fw[q] && self.finals[q])
    }

    /// A shortest accepted word, if any.
    pub fn shortest_word(&self) -> Option<Word> {
        let n = self.remove_epsilon();
        let mut prev: Vec<Option<(StateId, Letter)>> = vec![None; n.num_states()];
        let mut seen = vec![false; n.num_states()];
        let mut queue = VecDeque::new();
        for &q in &n.initial {
            seen[q] = true;
            queue.push_back(q);
        }
        while let Some(q) = queue.pop_front() {
            if n.finals[q] {
                let mut w = Vec::new();
                let mut cur = q;
                while let Some((p, a)) = prev[cur] {
                    w.push(a);
                    cur = p;
                }
                w.reverse();
                return Some(w);
            }
            for &(l, r) in &n.edges[q] {
                if !seen[r] {
                    seen[r] = true;
                    prev[r] = Some((q, l.expect("ε-free")));
                    queue.push_back(r);
                }
            }
        }
        None
    }

    fn disjoint_copy_into(&self, out: &mut Nfa, prefix: &str) -> usize {
        let offset = out.num_states();
        for q in 0..self.num_states() {
            out.add_named_state(format!("{prefix}{}", self.names[q]));
            out.finals[offset + q] = self.finals[q];
        }
        for q in 0..self.num_states() {
            for &(l, r) in &self.edges[q] {
                out.add_edge(offset + q, l, offset + r);
            }
        }
        offset
    }

    pub fn union(&self, other: &Nfa) -> Result<Nfa> {
        self.alphabet.ensure_same(&other.alphabet)?;
        let mut out = Nfa::new(self.alphabet.clone());
        let o1 = self.disjoint_copy_into(&mut out, "l.");
        let o2 = other.disjoint_copy_into(&mut out, "r.");
        for &q in &self.initial {
            out.initial.insert(o1 + q);
        }
        for &q in &other.initial {
            out.initial.insert(o2 + q);
        }
        Ok(out)
    }

    pub fn concat(&self, other: &Nfa) -> Result<Nfa> {
        self.alphabet.ensure_same(&other.alphabet)?;
        let mut out = Nfa::new(self.alphabet.clone());
        let o1 = self.disjoint_copy_into(&mut out, "l.");
        let o2 = other.disjoint_copy_into(&mut out, "r.");
        for &q in &self.initial {
            out.initial.insert(o1 + q);
        }
        for q in 0..self.num_states() {
            if self.finals[q] {
                out.finals[o1 + q] = false;
                for &p in &other.initial {
                    out.add_edge(o1 + q, None, o2 + p);
                }
            }
        }
        Ok(out)
    }

    pub fn star(&self) -> Nfa {
        let mut out = Nfa::new(self.alphabet.clone());
        let hub = out.add_named_state("star".into());
        let o = self.disjoint_copy_into(&mut out, "");
        out.initial.insert(hub);
        out.finals[hub] = true;
        for &q in &self.initial {
            out.add_edge(hub, None, o + q);
        }
        for q in 0..self.num_states() {
            if self.finals[q] {
                out.add_edge(o + q, None, hub);
            }
        }
        out
    }

    /// Product automaton for the intersection; only reachable pairs are built.
    pub fn intersect(&self, other: &Nfa) -> Result<Nfa> {
        self.alphabet.ensure_same(&other.alphabet)?;
        let a = self.remove_epsilon();
        let b = other.remove_epsilon();
        let mut out = Nfa::new(self.alphabet.clone());
        let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut queue = VecDeque::new();
        for &p in &a.initial {
            for &q in &b.initial {
                let id = out.add_named_state(format!("({},{})", a.names[p], b.names[q]));
                out.finals[id] = a.finals[p] && b.finals[q];
                out.initial.insert(id);
                index.insert((p, q), id);
                queue.push_back((p, q));
            }
        }
        while let Some((p, q)) = queue.pop_front() {
            let src = index[&(p, q)];
            for &(l1, p2) in &a.edges[p] {
                for &(l2, q2) in &b.edges[q] {
                    if l1 != l2 {
                        continue;
                    }
                    let dst = *index.entry((p2, q2)).or_insert_with(|| {
                        let id = out.add_named_state(format!("({},{})", a.names[p2], b.names[q2]));
                        out.finals[id] = a.finals[p2] && b.finals[q2];
                        queue.push_back((p2, q2));
                        id
                    });
                    out.add_edge(src, l1, dst);
                }
            }
        }
        Ok(out)
    }

    pub fn reverse(&self) -> Nfa {
        let mut out = Nfa::new(self.alphabet.clone());
        for q in 0..self.num_states() {
            out.add_named_state(self.names[q].clone());
        }
        for q in 0..self.num_states() {
            for &(l, r) in &self.edges[q] {
                out.add_edge(r, l, q);
            }
            if self.finals[q] {
                out.initial.insert(q);
            }
        }
        for &q in &self.initial {
            out.finals[q] = true;
        }
        out
    }

    /// Subset construction; fails once more than `cap` subsets are created.
    pub fn determinize(&self, cap: usize) -> Result<Dfa> {
        let k = self.alphabet.len();
        let mut index: HashMap<BTreeSet<StateId>, StateId> = HashMap::new();
        let mut sets: Vec<BTreeSet<StateId>> = Vec::new();
        let start = self.initial_closure();
        index.insert(start.clone(), 0);
        sets.push(start);
        let mut delta: Vec<StateId> = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            for a in 0..k {
                let next = self.step(&sets[i], a);
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        if sets.len() >= cap {
                            return Err(Error::StateCap { cap, during: "determinization" });
                        }
                        let id = sets.len();
                        index.insert(next.clone(), id);
                        sets.push(next);
                        id
                    }
                };
                delta.push(id);
            }
            i += 1;
        }
        let finals = sets.iter().map(|s| s.iter().any(|&q| self.finals[q])).collect();
        Ok(Dfa::from_parts(self.alphabet.clone(), delta, 0, finals))
    }

    pub fn complement(&self, cap: usize) -> Result<Nfa> {
        Ok(self.determinize(cap)?.complement().to_nfa())
    }

    /// Minimal complete deterministic automaton, returned as an `Nfa`.
    pub fn minimize(&self, cap: usize) -> Result<Nfa> {
        Ok(self.determinize(cap)?.minimize().to_nfa())
    }

    /// Decides `L(self) ⊆ L(other)` by exploring `self`-states paired with `other`-subsets.
    pub fn is_subset_of(&self, other: &Nfa, cap: usize) -> Result<bool> {
        self.alphabet.ensure_same(&other.alphabet)?;
        let a = self.remove_epsilon();
        let mut index: HashMap<BTreeSet<StateId>, usize> = HashMap::new();
        let mut subsets: Vec<BTreeSet<StateId>> = Vec::new();
        let mut intern = |s: BTreeSet<StateId>, subsets: &mut Vec<BTreeSet<StateId>>| -> usize {
            *index.entry(s.clone()).or_insert_with(|| {
                subsets.push(s);
                subsets.len() - 1
            })
        };
        let start = intern(other.initial_closure(), &mut subsets);
        let mut seen: std::collections::HashSet<(StateId, usize)> = std::collections::HashSet::new();
        let mut queue = VecDeque::new();
        for &p in &a.initial {
            if seen.insert((p, start)) {
                queue.push_back((p, start));
            }
        }
        while let Some((p, s)) = queue.pop_front() {
            if a.finals[p] && !subsets[s].iter().any(|&q| other.finals[q]) {
                return Ok(false);
            }
            if seen.len() > cap.saturating_mul(4) {
                return Err(Error::StateCap { cap, during: "inclusion check" });
            }
            for &(l, p2) in &a.edges[p] {
                let l = l.expect("ε-free");
                let next = other.step(&subsets[s], l);
                let s2 = intern(next, &mut subsets);
                if seen.insert((p2, s2)) {
                    queue.push_back((p2, s2));
                }
            }
        }
        Ok(true)
    }

    pub fn equivalent(&self, other: &Nfa, cap: usize) -> Result<bool> {
        Ok(self.is_subset_of(other, cap)? && other.is_subset_of(self, cap)?)
    }

    /// Same language over a larger alphabet containing every symbol of the current one.
    pub fn with_alphabet(&self, target: &Alphabet) -> Result<Nfa> {
        if &self.alphabet == target {
            return Ok(self.clone());
        }
        if !target.contains_alphabet(&self.alphabet) {
            return Err(Error::AlphabetMismatch(format!("{} is not contained in {}", self.alphabet, target)));
        }
        let map: Vec<Letter> =
            self.alphabet.letters().map(|a| target.letter(self.alphabet.symbol(a)).expect("contained")).collect();
        Ok(self.map_letters(target.clone(), |a| Some(map[a])))
    }

    /// Relabels every letter edge; letters mapped to `None` become ε-edges.
    pub fn map_letters(&self, target: Alphabet, f: impl Fn(Letter) -> Option<Letter>) -> Nfa {
        let mut out = Nfa::new(target);
        for q in 0..self.num_states() {
            out.add_named_state(self.names[q].clone());
            out.finals[q] = self.finals[q];
        }
        for q in 0..self.num_states() {
            for &(l, r) in &self.edges[q] {
                out.add_edge(q, l.and_then(&f), r);
            }
        }
        out.initial = self.initial.clone();
        out
    }

    /// Words of `L` with exactly `n` letters, shortest witness search over state sets.
    pub fn find_word_of_length(&self, n: usize) -> Option<Word> {
        let a = self.remove_epsilon().trim();
        if a.num_states() == 0 {
            return None;
        }
        // layer[i] = states reachable by words of length i
        let mut layers: Vec<BTreeSet<StateId>> = vec![a.initial.clone()];
        for i in 0..n {
            let mut next = BTreeSet::new();
            for &q in &layers[i] {
                for &(_, r) in &a.edges[q] {
                    next.insert(r);
                }
            }
            layers.push(next);
        }
        let mut cur = *layers[n].iter().find(|&&q| a.finals[q])?;
        let mut w = Vec::with_capacity(n);
        for i in (0..n).rev() {
            let (p, l) = layers[i]
                .iter()
                .flat_map(|&p| a.edges[p].iter().map(move |&(l, r)| (p, l, r)))
                .find(|&(_, _, r)| r == cur)
                .map(|(p, l, _)| (p, l.expect("ε-free")))
                .expect("layer predecessor exists");
            w.push(l);
            cur = p;
        }
        w.reverse();
        Some(w)
    }
}
