use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::alphabet::{words_up_to, Alphabet, Letter, Word};
use crate::automata::nfa::{Nfa, StateId};
use crate::automata::transducer::SequentialTransducer;
use crate::error::{Error, Result};

/// One edge of a counter automaton; `inc` has one entry per counter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaEdge {
    pub label: Option<Letter>,
    pub inc: Vec<u32>,
    pub to: StateId,
}

/// A nondeterministic automaton whose edges add non-negative vectors to a finite counter set.
#[derive(Clone, Debug)]
pub struct CounterAutomaton {
    alphabet: Alphabet,
    counters: Vec<String>,
    names: Vec<String>,
    edges: Vec<Vec<CaEdge>>,
    initial: BTreeSet<StateId>,
    finals: Vec<bool>,
}

impl CounterAutomaton {
    pub fn new(alphabet: Alphabet, counters: Vec<String>) -> Self {
        Self { alphabet, counters, names: Vec::new(), edges: Vec::new(), initial: BTreeSet::new(), finals: Vec::new() }
    }

    /// Counter-free automaton with the language of `nfa`.
    pub fn from_nfa(nfa: &Nfa) -> Self {
        let mut ca = Self::new(nfa.alphabet().clone(), Vec::new());
        for q in 0..nfa.num_states() {
            ca.add_named_state(nfa.name(q).to_string());
            ca.finals[q] = nfa.is_final(q);
        }
        for q in 0..nfa.num_states() {
            for &(l, r) in nfa.edges_from(q) {
                ca.add_edge(q, l, Vec::new(), r);
            }
        }
        ca.initial = nfa.initial().clone();
        ca
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn counters(&self) -> &[String] {
        &self.counters
    }

    pub fn num_counters(&self) -> usize {
        self.counters.len()
    }

    pub fn num_states(&self) -> usize {
        self.edges.len()
    }

    /// The same automaton with its counters renamed; `names` has one entry per counter.
    pub fn with_counter_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.counters.len());
        self.counters = names;
        self
    }

    pub fn add_state(&mut self) -> StateId {
        let id = self.edges.len();
        self.add_named_state(format!("q{id}"))
    }

    pub fn add_named_state(&mut self, name: String) -> StateId {
        self.edges.push(Vec::new());
        self.finals.push(false);
        self.names.push(name);
        self.edges.len() - 1
    }

    pub fn add_edge(&mut self, from: StateId, label: Option<Letter>, inc: Vec<u32>, to: StateId) {
        let inc = if inc.is_empty() { vec![0; self.counters.len()] } else { inc };
        assert_eq!(inc.len(), self.counters.len(), "increment arity");
        let e = CaEdge { label, inc, to };
        if !self.edges[from].contains(&e) {
            self.edges[from].push(e);
        }
    }

    /// Adds an edge incrementing a single counter by one.
    pub fn add_unit_edge(&mut self, from: StateId, label: Option<Letter>, counter: usize, to: StateId) {
        let mut inc = vec![0; self.counters.len()];
        inc[counter] = 1;
        self.add_edge(from, label, inc, to);
    }

    pub fn set_initial(&mut self, q: StateId) {
        self.initial.insert(q);
    }

    pub fn set_final(&mut self, q: StateId, f: bool) {
        self.finals[q] = f;
    }

    pub fn initial(&self) -> &BTreeSet<StateId> {
        &self.initial
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q]
    }

    pub fn edges_from(&self, q: StateId) -> &[CaEdge] {
        &self.edges[q]
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    /// The underlying automaton with counters forgotten.
    pub fn to_nfa(&self) -> Nfa {
        let mut n = Nfa::new(self.alphabet.clone());
        for q in 0..self.num_states() {
            n.add_named_state(self.names[q].clone());
            n.set_final(q, self.finals[q]);
        }
        for q in 0..self.num_states() {
            for e in &self.edges[q] {
                n.add_edge(q, e.label, e.to);
            }
        }
        for &q in &self.initial {
            n.set_initial(q);
        }
        n
    }

    /// Synchronous product on letters, interleaved on ε; counters are the disjoint union.
    pub fn product(&self, other: &CounterAutomaton) -> Result<CounterAutomaton> {
        self.alphabet.ensure_same(&other.alphabet)?;
        let n1 = self.counters.len();
        let n2 = other.counters.len();
        let counters = self.counters.iter().chain(other.counters.iter()).cloned().collect();
        let mut out = CounterAutomaton::new(self.alphabet.clone(), counters);
        let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut intern = |out: &mut CounterAutomaton, queue: &mut VecDeque<(StateId, StateId)>, p: StateId, q: StateId| {
            *index.entry((p, q)).or_insert_with(|| {
                let id = out.add_named_state(format!("({},{})", self.names[p], other.names[q]));
                out.finals[id] = self.finals[p] && other.finals[q];
                queue.push_back((p, q));
                id
            })
        };
        for &p in &self.initial {
            for &q in &other.initial {
                let id = intern(&mut out, &mut queue, p, q);
                out.initial.insert(id);
            }
        }
        let pad = |a: &[u32], b: &[u32]| -> Vec<u32> {
            let mut v = Vec::with_capacity(n1 + n2);
            if a.is_empty() {
                v.extend(std::iter::repeat_n(0, n1));
            } else {
                v.extend_from_slice(a);
            }
            if b.is_empty() {
                v.extend(std::iter::repeat_n(0, n2));
            } else {
                v.extend_from_slice(b);
            }
            v
        };
        while let Some((p, q)) = queue.pop_front() {
            let src = intern(&mut out, &mut queue, p, q);
            for e in &self.edges[p] {
                match e.label {
                    None => {
                        let dst = intern(&mut out, &mut queue, e.to, q);
                        out.add_edge(src, None, pad(&e.inc, &[]), dst);
                    }
                    Some(a) => {
                        for f in &other.edges[q] {
                            if f.label == Some(a) {
                                let dst = intern(&mut out, &mut queue, e.to, f.to);
                                out.add_edge(src, Some(a), pad(&e.inc, &f.inc), dst);
                            }
                        }
                    }
                }
            }
            for f in &other.edges[q] {
                if f.label.is_none() {
                    let dst = intern(&mut out, &mut queue, p, f.to);
                    out.add_edge(src, None, pad(&[], &f.inc), dst);
                }
            }
        }
        Ok(out)
    }

    /// Product with a counter-free automaton; the counters are those of `self`.
    pub fn restrict(&self, l: &Nfa) -> Result<CounterAutomaton> {
        self.product(&CounterAutomaton::from_nfa(l))
    }

    /// Words `uv` with `u` accepted by `self` and `v` by `other`; counters are the disjoint union.
    pub fn concat(&self, other: &CounterAutomaton) -> Result<CounterAutomaton> {
        self.alphabet.ensure_same(&other.alphabet)?;
        let n1 = self.counters.len();
        let n2 = other.counters.len();
        let counters = self.counters.iter().chain(other.counters.iter()).cloned().collect();
        let mut out = CounterAutomaton::new(self.alphabet.clone(), counters);
        for q in 0..self.num_states() {
            out.add_named_state(format!("l.{}", self.names[q]));
        }
        for q in 0..other.num_states() {
            let id = out.add_named_state(format!("r.{}", other.names[q]));
            out.finals[id] = other.finals[q];
        }
        let off = self.num_states();
        for q in 0..self.num_states() {
            for e in &self.edges[q] {
                let mut inc = e.inc.clone();
                inc.extend(std::iter::repeat_n(0, n2));
                out.add_edge(q, e.label, inc, e.to);
            }
            if self.finals[q] {
                for &p in &other.initial {
                    out.add_edge(q, None, vec![0; n1 + n2], off + p);
                }
            }
        }
        for q in 0..other.num_states() {
            for e in &other.edges[q] {
                let mut inc = vec![0; n1];
                inc.extend_from_slice(&e.inc);
                out.add_edge(off + q, e.label, inc, off + e.to);
            }
        }
        out.initial = self.initial.clone();
        Ok(out)
    }

    /// Pulls `self` (over `f`'s output alphabet) back along `f`: the result on `w` behaves as `self` on `f(w)`.
    pub fn compose_transducer(&self, f: &SequentialTransducer) -> Result<CounterAutomaton> {
        self.alphabet.ensure_same(f.output())?;
        let nc = self.counters.len();
        let mut out = CounterAutomaton::new(f.input().clone(), self.counters.clone());
        // Settled states pair a state of `self` with a transducer state; chains in between emit outputs.
        let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut intern = |out: &mut CounterAutomaton, queue: &mut VecDeque<(StateId, StateId)>, s: StateId, q: StateId| {
            *index.entry((s, q)).or_insert_with(|| {
                queue.push_back((s, q));
                out.add_named_state(format!("({},{})", self.names[s], f.name(q)))
            })
        };
        for &s in &self.initial {
            let id = intern(&mut out, &mut queue, s, f.initial());
            out.initial.insert(id);
        }
        while let Some((s, q)) = queue.pop_front() {
            let src = intern(&mut out, &mut queue, s, q);
            for e in &self.edges[s] {
                if e.label.is_none() {
                    let dst = intern(&mut out, &mut queue, e.to, q);
                    out.add_edge(src, None, e.inc.clone(), dst);
                }
            }
            for a in f.input().letters() {
                let (q2, o) = f.next(q, a);
                let o = o.to_vec();
                let entry = out.add_state();
                out.add_edge(src, Some(a), vec![0; nc], entry);
                let ends = self.emit_through(&mut out, entry, s, &o);
                for (t, node) in ends {
                    let dst = intern(&mut out, &mut queue, t, q2);
                    out.add_edge(node, None, vec![0; nc], dst);
                }
            }
            let fo = f.final_output(q).to_vec();
            let entry = out.add_state();
            out.add_edge(src, None, vec![0; nc], entry);
            for (t, node) in self.emit_through(&mut out, entry, s, &fo) {
                if self.finals[t] {
                    out.finals[node] = true;
                }
            }
        }
        Ok(out)
    }

    /// Simulates `self` from `s` on `w` inside `out`, starting at node `entry`, with ε-moves allowed
    /// between letters. Returns `(state of self, node)` pairs reachable after all of `w`.
    fn emit_through(&self, out: &mut CounterAutomaton, entry: StateId, s: StateId, w: &[Letter]) -> Vec<(StateId, StateId)> {
        // layer maps a state of `self` to its node after reading a prefix of `w`.
        let mut layer: HashMap<StateId, StateId> = HashMap::from([(s, entry)]);
        for pos in 0..=w.len() {
            // ε-saturation within the layer
            let mut stack: Vec<StateId> = layer.keys().copied().collect();
            while let Some(t) = stack.pop() {
                let node = layer[&t];
                for e in &self.edges[t] {
                    if e.label.is_none() {
                        let dst = *layer.entry(e.to).or_insert_with(|| {
                            stack.push(e.to);
                            out.add_state()
                        });
                        out.add_edge(node, None, e.inc.clone(), dst);
                    }
                }
            }
            if pos == w.len() {
                break;
            }
            let mut next: HashMap<StateId, StateId> = HashMap::new();
            let mut keys: Vec<StateId> = layer.keys().copied().collect();
            keys.sort_unstable();
            for t in keys {
                let node = layer[&t];
                for e in &self.edges[t] {
                    if e.label == Some(w[pos]) {
                        let dst = *next.entry(e.to).or_insert_with(|| out.add_state());
                        out.add_edge(node, None, e.inc.clone(), dst);
                    }
                }
            }
            layer = next;
        }
        let mut ends: Vec<(StateId, StateId)> = layer.into_iter().collect();
        ends.sort_unstable();
        ends
    }
}

/// A deterministic complete counter automaton with a final-increment function: a total map `Σ* → ℕ^C`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CountingAutomaton {
    alphabet: Alphabet,
    counters: Vec<String>,
    names: Vec<String>,
    initial: StateId,
    delta: Vec<(StateId, Vec<u32>)>,
    final_inc: Vec<Vec<u32>>,
}

impl CountingAutomaton {
    /// `delta[q * |Σ| + a] = (successor, increment)`.
    pub fn new(
        alphabet: Alphabet,
        counters: Vec<String>,
        names: Vec<String>,
        initial: StateId,
        delta: Vec<(StateId, Vec<u32>)>,
        final_inc: Vec<Vec<u32>>,
    ) -> Result<Self> {
        let n = names.len();
        let c = counters.len();
        if n == 0 || initial >= n || delta.len() != n * alphabet.len() || final_inc.len() != n {
            return Err(Error::InvalidAutomaton("counting automaton must be deterministic and complete".into()));
        }
        if delta.iter().any(|(q, v)| *q >= n || v.len() != c) || final_inc.iter().any(|v| v.len() != c) {
            return Err(Error::InvalidAutomaton("counting automaton increments have wrong arity".into()));
        }
        Ok(Self { alphabet, counters, names, initial, delta, final_inc })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn counters(&self) -> &[String] {
        &self.counters
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn next(&self, q: StateId, a: Letter) -> (StateId, &[u32]) {
        let (r, v) = &self.delta[q * self.alphabet.len() + a];
        (*r, v)
    }

    pub fn final_inc(&self, q: StateId) -> &[u32] {
        &self.final_inc[q]
    }

    pub fn counter_index(&self, name: &str) -> Option<usize> {
        self.counters.iter().position(|c| c == name)
    }

    /// Accumulated increments of the unique run plus the final increment of its last state.
    pub fn eval(&self, w: &[Letter]) -> Vec<u64> {
        let mut mu = vec![0u64; self.counters.len()];
        let mut q = self.initial;
        for &a in w {
            let (r, v) = self.next(q, a);
            for (m, &x) in mu.iter_mut().zip(v) {
                *m += u64::from(x);
            }
            q = r;
        }
        for (m, &x) in mu.iter_mut().zip(&self.final_inc[q]) {
            *m += u64::from(x);
        }
        mu
    }

    /// The map `w ↦ c^{A(w)(c)}` into a one-letter alphabet `{c}` (symbol `'#'`).
    pub fn counter_transducer(&self, c: usize) -> SequentialTransducer {
        let out = Alphabet::new(['#']).expect("non-empty");
        let delta = self.delta.iter().map(|(r, v)| (*r, vec![0; v[c] as usize])).collect();
        let fin = self.final_inc.iter().map(|v| vec![0; v[c] as usize]).collect();
        SequentialTransducer::new(self.alphabet.clone(), out, self.names.clone(), self.initial, delta, fin)
            .expect("well-formed counter transducer")
    }

    /// The counting automaton `P_k`: prefix flags `a_u`, suffix flags `b_u` and occurrence counts `c_u`
    /// for all `u` with `|u| ≤ k`. The state is the last `min(|w|, k)` letters.
    pub fn build_pk(k: usize, alphabet: Alphabet) -> Result<Self> {
        if k == 0 {
            return Err(Error::Precondition("k must be positive".into()));
        }
        let sigma = alphabet.len();
        let words: Vec<Word> = words_up_to(sigma, k);
        let word_index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let nw = words.len();
        let counters: Vec<String> = ["a", "b", "c"]
            .iter()
            .flat_map(|kind| words.iter().map(move |u| (kind, u)))
            .map(|(kind, u)| format!("{kind}_{}", alphabet.format_word(u)))
            .collect();
        let (pa, pb, pc) = (0, nw, 2 * nw);
        let names: Vec<String> = words.iter().map(|u| format!("[{}]", alphabet.format_word(u))).collect();
        let mut delta = Vec::with_capacity(nw * sigma);
        for x in &words {
            for a in 0..sigma {
                let mut xa = x.clone();
                xa.push(a);
                let mut inc = vec![0u32; 3 * nw];
                if x.len() < k {
                    inc[pa + word_index[&xa]] = 1;
                }
                // c_ε counts every position; it is bumped once per letter and once more at the end.
                for len in 0..=xa.len().min(k) {
                    let suffix = xa[xa.len() - len..].to_vec();
                    inc[pc + word_index[&suffix]] += 1;
                }
                let state = if xa.len() > k { xa[1..].to_vec() } else { xa };
                delta.push((word_index[&state], inc));
            }
        }
        let final_inc = words
            .iter()
            .map(|x| {
                let mut inc = vec![0u32; 3 * nw];
                inc[pa] = 1;
                inc[pc] = 1;
                for len in 0..=x.len() {
                    inc[pb + word_index[&x[x.len() - len..].to_vec()]] = 1;
                }
                inc
            })
            .collect();
        Self::new(alphabet, counters, names, 0, delta, final_inc)
    }
}
