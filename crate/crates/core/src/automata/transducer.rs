use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::alphabet::{Alphabet, Letter, Word};
use crate::automata::nfa::{Nfa, StateId};
use crate::error::{Error, Result};

/// A deterministic, complete, ε-free transducer with per-edge and final outputs.
/// It realizes a total function from input words to output words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SequentialTransducer {
    input: Alphabet,
    output: Alphabet,
    names: Vec<String>,
    initial: StateId,
    delta: Vec<(StateId, Word)>,
    final_output: Vec<Word>,
}

impl SequentialTransducer {
    /// `delta[q * |input| + a]` gives the successor and emitted word.
    pub fn new(
        input: Alphabet,
        output: Alphabet,
        names: Vec<String>,
        initial: StateId,
        delta: Vec<(StateId, Word)>,
        final_output: Vec<Word>,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 || initial >= n {
            return Err(Error::InvalidAutomaton("transducer needs an initial state".into()));
        }
        if delta.len() != n * input.len() || final_output.len() != n {
            return Err(Error::InvalidAutomaton("transducer table must be complete".into()));
        }
        let out_ok = |w: &Word| w.iter().all(|&b| b < output.len());
        if delta.iter().any(|(q, w)| *q >= n || !out_ok(w)) || !final_output.iter().all(out_ok) {
            return Err(Error::InvalidAutomaton("transducer edge out of range".into()));
        }
        Ok(Self { input, output, names, initial, delta, final_output })
    }

    /// One-state transducer that applies a letter map (`None` erases the letter).
    pub fn letter_map(input: Alphabet, output: Alphabet, f: impl Fn(Letter) -> Option<Letter>) -> Self {
        let delta = input.letters().map(|a| (0, f(a).into_iter().collect())).collect();
        Self { input, output, names: vec!["t0".into()], initial: 0, delta, final_output: vec![Vec::new()] }
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        Self::letter_map(alphabet.clone(), alphabet, Some)
    }

    /// Erases every letter outside `keep`; the output alphabet is `keep`'s symbols.
    pub fn projection(input: &Alphabet, keep: &[Letter]) -> Result<Self> {
        let output = Alphabet::new(keep.iter().map(|&a| input.symbol(a)))?;
        let out2 = output.clone();
        let inp = input.clone();
        Ok(Self::letter_map(input.clone(), output, move |a| {
            if keep.contains(&a) {
                out2.letter(inp.symbol(a))
            } else {
                None
            }
        }))
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
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

    pub fn next(&self, q: StateId, a: Letter) -> (StateId, &[Letter]) {
        let (r, w) = &self.delta[q * self.input.len() + a];
        (*r, w)
    }

    pub fn final_output(&self, q: StateId) -> &[Letter] {
        &self.final_output[q]
    }

    pub fn apply_word(&self, w: &[Letter]) -> Word {
        let mut q = self.initial;
        let mut out = Vec::new();
        for &a in w {
            let (r, o) = self.next(q, a);
            out.extend_from_slice(o);
            q = r;
        }
        out.extend_from_slice(&self.final_output[q]);
        out
    }

    /// Automaton for the image `f(L)`.
    pub fn apply(&self, l: &Nfa) -> Result<Nfa> {
        l.alphabet().ensure_same(&self.input)?;
        let l = l.remove_epsilon();
        let mut out = Nfa::new(self.output.clone());
        let accept = out.add_named_state("accept".into());
        out.set_final(accept, true);
        let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut intern = |out: &mut Nfa, queue: &mut VecDeque<(StateId, StateId)>, p: StateId, q: StateId| {
            *index.entry((p, q)).or_insert_with(|| {
                queue.push_back((p, q));
                out.add_named_state(format!("({},{})", l.name(p), self.names[q]))
            })
        };
        for &p in l.initial() {
            let id = intern(&mut out, &mut queue, p, self.initial);
            out.set_initial(id);
        }
        while let Some((p, q)) = queue.pop_front() {
            let src = intern(&mut out, &mut queue, p, q);
            for &(a, p2) in l.edges_from(p) {
                let a = a.expect("ε-free");
                let (q2, o) = self.next(q, a);
                let o = o.to_vec();
                let dst = intern(&mut out, &mut queue, p2, q2);
                emit_chain(&mut out, src, &o, dst);
            }
            if l.is_final(p) {
                emit_chain(&mut out, src, &self.final_output[q].clone(), accept);
            }
        }
        Ok(out)
    }

    /// Automaton for the inverse image `{w | f(w) ∈ L}`.
    pub fn inverse_apply(&self, l: &Nfa) -> Result<Nfa> {
        l.alphabet().ensure_same(&self.output)?;
        let l = l.remove_epsilon();
        let reach = |s: StateId, w: &[Letter]| -> BTreeSet<StateId> {
            let mut cur = BTreeSet::from([s]);
            for &b in w {
                cur = l.step(&cur, b);
                if cur.is_empty() {
                    break;
                }
            }
            cur
        };
        let mut out = Nfa::new(self.input.clone());
        let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut intern = |out: &mut Nfa, queue: &mut VecDeque<(StateId, StateId)>, q: StateId, s: StateId| {
            *index.entry((q, s)).or_insert_with(|| {
                queue.push_back((q, s));
                out.add_named_state(format!("({},{})", self.names[q], l.name(s)))
            })
        };
        for &s in l.initial() {
            let id = intern(&mut out, &mut queue, self.initial, s);
            out.set_initial(id);
        }
        while let Some((q, s)) = queue.pop_front() {
            let src = intern(&mut out, &mut queue, q, s);
            if reach(s, &self.final_output[q]).iter().any(|&t| l.is_final(t)) {
                out.set_final(src, true);
            }
            for a in self.input.letters() {
                let (q2, o) = self.next(q, a);
                for s2 in reach(s, o) {
                    let dst = intern(&mut out, &mut queue, q2, s2);
                    out.add_edge(src, Some(a), dst);
                }
            }
        }
        Ok(out)
    }
}

/// Adds a path from `src` to `dst` spelling `w`; the empty word becomes an ε-edge.
pub(crate) fn emit_chain(out: &mut Nfa, src: StateId, w: &[Letter], dst: StateId) {
    if w.is_empty() {
        out.add_edge(src, None, dst);
        return;
    }
    let mut cur = src;
    for (i, &b) in w.iter().enumerate() {
        let next = if i + 1 == w.len() { dst } else { out.add_state() };
        out.add_edge(cur, Some(b), next);
        cur = next;
    }
}
