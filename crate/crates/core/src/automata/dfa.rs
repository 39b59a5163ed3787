use std::collections::HashMap;

use crate::alphabet::{Alphabet, Letter};
use crate::automata::nfa::{Nfa, StateId};

/// A complete deterministic automaton; `delta[q * |Σ| + a]` is the successor.
#[derive(Clone, Debug)]
pub struct Dfa {
    alphabet: Alphabet,
    delta: Vec<StateId>,
    initial: StateId,
    finals: Vec<bool>,
}

impl Dfa {
    pub fn from_parts(alphabet: Alphabet, delta: Vec<StateId>, initial: StateId, finals: Vec<bool>) -> Self {
        assert_eq!(delta.len(), finals.len() * alphabet.len(), "transition table must be complete");
        assert!(initial < finals.len());
        Self { alphabet, delta, initial, finals }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.finals.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q]
    }

    pub fn next(&self, q: StateId, a: Letter) -> StateId {
        self.delta[q * self.alphabet.len() + a]
    }

    pub fn run_from(&self, q: StateId, w: &[Letter]) -> StateId {
        w.iter().fold(q, |q, &a| self.next(q, a))
    }

    pub fn run(&self, w: &[Letter]) -> StateId {
        self.run_from(self.initial, w)
    }

    pub fn accepts(&self, w: &[Letter]) -> bool {
        self.finals[self.run(w)]
    }

    pub fn complement(&self) -> Dfa {
        Dfa { finals: self.finals.iter().map(|f| !f).collect(), ..self.clone() }
    }

    /// Minimal equivalent automaton: reachable part, then Moore partition refinement.
    pub fn minimize(&self) -> Dfa {
        let k = self.alphabet.len();
        let mut order = vec![self.initial];
        let mut seen = vec![usize::MAX; self.num_states()];
        seen[self.initial] = 0;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for a in 0..k {
                let r = self.next(q, a);
                if seen[r] == usize::MAX {
                    seen[r] = order.len();
                    order.push(r);
                }
            }
            i += 1;
        }
        let n = order.len();
        let mut class: Vec<usize> = order.iter().map(|&q| usize::from(self.finals[q])).collect();
        let mut num_classes = class.iter().copied().max().map_or(0, |m| m + 1);
        loop {
            let mut sig_index: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut next_class = vec![0; n];
            for (j, &q) in order.iter().enumerate() {
                let sig: Vec<usize> = (0..k).map(|a| class[seen[self.next(q, a)]]).collect();
                let len = sig_index.len();
                next_class[j] = *sig_index.entry((class[j], sig)).or_insert(len);
            }
            let count = sig_index.len();
            class = next_class;
            if count == num_classes {
                break;
            }
            num_classes = count;
        }
        let mut delta = vec![0; num_classes * k];
        let mut finals = vec![false; num_classes];
        for (j, &q) in order.iter().enumerate() {
            finals[class[j]] = self.finals[q];
            for a in 0..k {
                delta[class[j] * k + a] = class[seen[self.next(q, a)]];
            }
        }
        Dfa { alphabet: self.alphabet.clone(), delta, initial: class[0], finals }
    }

    /// A key equal for two automata iff they accept the same language: the minimal automaton with states
    /// renumbered in breadth-first order, flattened to finality bits and transitions.
    pub fn canonical_key(&self) -> Vec<usize> {
        let m = self.minimize();
        let k = m.alphabet.len();
        let mut number = vec![usize::MAX; m.num_states()];
        let mut order = vec![m.initial];
        number[m.initial] = 0;
        let mut i = 0;
        while i < order.len() {
            for a in 0..k {
                let r = m.next(order[i], a);
                if number[r] == usize::MAX {
                    number[r] = order.len();
                    order.push(r);
                }
            }
            i += 1;
        }
        let mut key = Vec::with_capacity(order.len() * (k + 1));
        for &q in &order {
            key.push(usize::from(m.finals[q]));
            key.extend((0..k).map(|a| number[m.next(q, a)]));
        }
        key
    }

    pub fn to_nfa(&self) -> Nfa {
        let mut n = Nfa::new(self.alphabet.clone());
        for _ in 0..self.num_states() {
            n.add_state();
        }
        for q in 0..self.num_states() {
            n.set_final(q, self.finals[q]);
            for a in 0..self.alphabet.len() {
                n.add_edge(q, Some(a), self.next(q, a));
            }
        }
        n.set_initial(self.initial);
        n
    }
}
