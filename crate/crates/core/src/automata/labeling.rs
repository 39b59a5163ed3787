use std::collections::{HashMap, HashSet, VecDeque};

use crate::alphabet::{Alphabet, Letter, Word};
use crate::automata::dfa::Dfa;
use crate::automata::nfa::{Nfa, StateId};
use crate::automata::transducer::SequentialTransducer;
use crate::error::{Error, Result};

/// A deterministic, complete, ε-free automaton read as a labeling automaton:
/// every word has exactly one run, and all states count as final.
#[derive(Clone, Debug)]
pub struct LabelingAutomaton {
    dfa: Dfa,
    names: Vec<String>,
}

/// The unique run of a labeling automaton on a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelingRun {
    /// Edge ids, one per letter.
    pub edges: Word,
    /// First and last state.
    pub sigma: (StateId, StateId),
}

impl PartialEq for LabelingAutomaton {
    fn eq(&self, other: &Self) -> bool {
        self.dfa.alphabet() == other.dfa.alphabet()
            && self.dfa.num_states() == other.dfa.num_states()
            && self.dfa.initial() == other.dfa.initial()
            && (0..self.dfa.num_states())
                .all(|q| self.dfa.alphabet().letters().all(|a| self.dfa.next(q, a) == other.dfa.next(q, a)))
    }
}

impl Eq for LabelingAutomaton {}

impl std::hash::Hash for LabelingAutomaton {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.dfa.num_states().hash(state);
        self.dfa.initial().hash(state);
    }
}

impl LabelingAutomaton {
    /// Wraps a complete DFA; its final states are ignored.
    pub fn from_dfa(dfa: Dfa) -> Self {
        let names = (0..dfa.num_states()).map(|q| format!("s{q}")).collect();
        Self { dfa, names }
    }

    /// Accepts an `Nfa` that is deterministic, complete, ε-free and has one initial state.
    pub fn from_nfa(nfa: &Nfa) -> Result<Self> {
        if nfa.initial().len() != 1 {
            return Err(Error::InvalidAutomaton("labeling automaton needs exactly one initial state".into()));
        }
        let k = nfa.alphabet().len();
        let mut delta = vec![usize::MAX; nfa.num_states() * k];
        for q in 0..nfa.num_states() {
            for &(l, r) in nfa.edges_from(q) {
                let a = l.ok_or_else(|| Error::InvalidAutomaton("labeling automaton must be ε-free".into()))?;
                if delta[q * k + a] != usize::MAX && delta[q * k + a] != r {
                    return Err(Error::InvalidAutomaton(format!(
                        "labeling automaton must be deterministic (state {})",
                        nfa.name(q)
                    )));
                }
                delta[q * k + a] = r;
            }
        }
        if let Some(i) = delta.iter().position(|&r| r == usize::MAX) {
            return Err(Error::InvalidAutomaton(format!(
                "labeling automaton must be complete (state {} lacks {:?})",
                nfa.name(i / k),
                nfa.alphabet().symbol(i % k)
            )));
        }
        let initial = *nfa.initial().iter().next().expect("one initial");
        let finals = vec![true; nfa.num_states()];
        let dfa = Dfa::from_parts(nfa.alphabet().clone(), delta, initial, finals);
        let names = (0..nfa.num_states()).map(|q| nfa.name(q).to_string()).collect();
        Ok(Self { dfa, names })
    }

    /// The cycle automaton `M_d`: states `s0..s{d-1}`, every letter advances one step.
    pub fn build_md(d: usize, alphabet: Alphabet) -> Result<Self> {
        if d == 0 {
            return Err(Error::Precondition("d must be positive".into()));
        }
        let k = alphabet.len();
        let delta = (0..d).flat_map(|q| std::iter::repeat_n((q + 1) % d, k)).collect();
        Ok(Self::from_dfa(Dfa::from_parts(alphabet, delta, 0, vec![true; d])))
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.dfa.alphabet()
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn num_states(&self) -> usize {
        self.dfa.num_states()
    }

    pub fn initial(&self) -> StateId {
        self.dfa.initial()
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn next(&self, q: StateId, a: Letter) -> StateId {
        self.dfa.next(q, a)
    }

    pub fn num_edges(&self) -> usize {
        self.num_states() * self.alphabet().len()
    }

    pub fn edge_id(&self, q: StateId, a: Letter) -> Letter {
        q * self.alphabet().len() + a
    }

    pub fn edge_source(&self, e: Letter) -> StateId {
        e / self.alphabet().len()
    }

    pub fn edge_letter(&self, e: Letter) -> Letter {
        e % self.alphabet().len()
    }

    pub fn edge_target(&self, e: Letter) -> StateId {
        self.next(self.edge_source(e), self.edge_letter(e))
    }

    /// Alphabet of edge ids used by run words.
    pub fn edge_alphabet(&self) -> Alphabet {
        Alphabet::generated(self.num_edges())
    }

    pub fn run_from(&self, q: StateId, w: &[Letter]) -> LabelingRun {
        let mut cur = q;
        let mut edges = Vec::with_capacity(w.len());
        for &a in w {
            edges.push(self.edge_id(cur, a));
            cur = self.next(cur, a);
        }
        LabelingRun { edges, sigma: (q, cur) }
    }

    pub fn run(&self, w: &[Letter]) -> LabelingRun {
        self.run_from(self.initial(), w)
    }

    /// The run map `w ↦ A(w)` as a transducer into the edge alphabet.
    pub fn run_transducer(&self) -> SequentialTransducer {
        let k = self.alphabet().len();
        let delta = (0..self.num_states())
            .flat_map(|q| (0..k).map(move |a| (q, a)))
            .map(|(q, a)| (self.next(q, a), vec![self.edge_id(q, a)]))
            .collect();
        SequentialTransducer::new(
            self.alphabet().clone(),
            self.edge_alphabet(),
            self.names.clone(),
            self.initial(),
            delta,
            vec![Vec::new(); self.num_states()],
        )
        .expect("well-formed run transducer")
    }

    /// The map `w ↦ σ_A(w)`, emitting the last state as a single letter at the end.
    pub fn sigma_transducer(&self) -> SequentialTransducer {
        let k = self.alphabet().len();
        let delta = (0..self.num_states())
            .flat_map(|q| (0..k).map(move |a| (q, a)))
            .map(|(q, a)| (self.next(q, a), Vec::new()))
            .collect();
        SequentialTransducer::new(
            self.alphabet().clone(),
            Alphabet::generated(self.num_states()),
            self.names.clone(),
            self.initial(),
            delta,
            (0..self.num_states()).map(|q| vec![q]).collect(),
        )
        .expect("well-formed sigma transducer")
    }

    /// Words whose run ends in `q`.
    pub fn class_filter(&self, q: StateId) -> Nfa {
        let mut n = self.dfa.to_nfa();
        for p in 0..n.num_states() {
            n.set_final(p, p == q);
        }
        n
    }

    /// Run words (over the edge alphabet) of runs from `p` to `q`.
    pub fn run_language(&self, p: StateId, q: StateId) -> Nfa {
        let mut n = Nfa::new(self.edge_alphabet());
        for s in 0..self.num_states() {
            n.add_named_state(self.names[s].clone());
        }
        for s in 0..self.num_states() {
            for a in self.alphabet().letters() {
                n.add_edge(s, Some(self.edge_id(s, a)), self.next(s, a));
            }
        }
        n.set_initial(p);
        n.set_final(q, true);
        n
    }
}

/// Whether every word has at most one accepting run: no pair of distinct states is both
/// reachable and co-reachable in the self-product of the trimmed ε-free automaton.
pub fn is_unambiguous(nfa: &Nfa) -> bool {
    let n = nfa.remove_epsilon().trim();
    let mut square = Nfa::new(n.alphabet().clone());
    let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |square: &mut Nfa, pairs: &mut Vec<(StateId, StateId)>, queue: &mut VecDeque<StateId>, p, q| {
        *index.entry((p, q)).or_insert_with(|| {
            let id = square.add_state();
            square.set_final(id, n.is_final(p) && n.is_final(q));
            pairs.push((p, q));
            queue.push_back(id);
            id
        })
    };
    for &p in n.initial() {
        for &q in n.initial() {
            let id = intern(&mut square, &mut pairs, &mut queue, p, q);
            square.set_initial(id);
        }
    }
    while let Some(id) = queue.pop_front() {
        let (p, q) = pairs[id];
        for &(l1, p2) in n.edges_from(p) {
            for &(l2, q2) in n.edges_from(q) {
                if l1 == l2 {
                    let dst = intern(&mut square, &mut pairs, &mut queue, p2, q2);
                    square.add_edge(id, l1, dst);
                }
            }
        }
    }
    let live: HashSet<String> = {
        let t = square.trim();
        (0..t.num_states()).map(|s| t.name(s).to_string()).collect()
    };
    !(0..square.num_states()).any(|id| pairs[id].0 != pairs[id].1 && live.contains(square.name(id)))
}
