//! Parameterized well-quasi-orderings on words and their comparison predicates.

pub mod monoid;
pub mod parse;

use std::collections::{HashMap, VecDeque};
use std::fmt;

pub use monoid::{morphism_leq, FiniteMonoid, Morphism, MorphismFile};
pub use parse::parse_order;

use crate::alphabet::{Alphabet, Letter};
use crate::automata::{CountingAutomaton, LabelingAutomaton, Nfa, SequentialTransducer};
use crate::error::{Error, Result};

/// A parameterized WQO on the words of one alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OrderSpec {
    /// The subword ordering.
    Subword(Alphabet),
    /// `u ⪯ v` iff `f(u) ⪯_inner f(v)`.
    Via { f: SequentialTransducer, inner: Box<OrderSpec> },
    /// Intersection of orders over one alphabet; flat, duplicate-free, at least two members.
    Conj(Vec<OrderSpec>),
    /// Equal end states and subword-comparable runs.
    Labeling(LabelingAutomaton),
    /// The labeling order of the cycle `M_d`.
    Mod { d: usize, automaton: LabelingAutomaton },
    /// Pointwise comparison of counter vectors.
    Counting(CountingAutomaton),
    /// Insertion of blocks that stabilize the surrounding images in a finite monoid.
    Morphism(Morphism),
}

impl OrderSpec {
    pub fn subword(alphabet: Alphabet) -> Self {
        OrderSpec::Subword(alphabet)
    }

    pub fn modulo(d: usize, alphabet: Alphabet) -> Result<Self> {
        Ok(OrderSpec::Mod { d, automaton: LabelingAutomaton::build_md(d, alphabet)? })
    }

    pub fn labeling(a: LabelingAutomaton) -> Self {
        OrderSpec::Labeling(a)
    }

    pub fn via(f: SequentialTransducer, inner: OrderSpec) -> Result<Self> {
        if f.output() != inner.alphabet() {
            return Err(Error::AlphabetMismatch(format!(
                "transducer outputs {} but the inner order is over {}",
                f.output(),
                inner.alphabet()
            )));
        }
        Ok(OrderSpec::Via { f, inner: Box::new(inner) })
    }

    /// Conjunction; nested conjunctions are flattened and duplicates dropped.
    pub fn conj(parts: Vec<OrderSpec>) -> Result<Self> {
        let mut flat: Vec<OrderSpec> = Vec::new();
        for p in parts {
            let items = match p {
                OrderSpec::Conj(inner) => inner,
                other => vec![other],
            };
            for o in items {
                if !flat.contains(&o) {
                    flat.push(o);
                }
            }
        }
        let first = flat.first().ok_or_else(|| Error::Precondition("empty conjunction".into()))?;
        let alphabet = first.alphabet().clone();
        for o in &flat {
            o.alphabet().ensure_same(&alphabet)?;
        }
        if flat.len() == 1 {
            return Ok(flat.pop().expect("one"));
        }
        Ok(OrderSpec::Conj(flat))
    }

    pub fn counting(a: CountingAutomaton) -> Self {
        OrderSpec::Counting(a)
    }

    /// The counting order of `P_k`.
    pub fn ltt(k: usize, alphabet: Alphabet) -> Result<Self> {
        Ok(OrderSpec::Counting(CountingAutomaton::build_pk(k, alphabet)?))
    }

    pub fn morphism(theta: Morphism) -> Self {
        OrderSpec::Morphism(theta)
    }

    pub fn alphabet(&self) -> &Alphabet {
        match self {
            OrderSpec::Subword(a) => a,
            OrderSpec::Via { f, .. } => f.input(),
            OrderSpec::Conj(parts) => parts[0].alphabet(),
            OrderSpec::Labeling(a) => a.alphabet(),
            OrderSpec::Mod { automaton, .. } => automaton.alphabet(),
            OrderSpec::Counting(a) => a.alphabet(),
            OrderSpec::Morphism(m) => &m.alphabet,
        }
    }

    /// The labeling automaton behind `Labeling` and `Mod` orders.
    pub fn labeling_automaton(&self) -> Option<&LabelingAutomaton> {
        match self {
            OrderSpec::Labeling(a) => Some(a),
            OrderSpec::Mod { automaton, .. } => Some(automaton),
            _ => None,
        }
    }

    /// Counting orders rewritten as the conjunction over counters `c` of `⊑` after `w ↦ #^{A(w)(c)}`.
    pub fn conjunction_encoding(&self) -> Option<OrderSpec> {
        let OrderSpec::Counting(a) = self else { return None };
        let parts = (0..a.counters().len())
            .map(|c| {
                let f = a.counter_transducer(c);
                let inner = OrderSpec::Subword(f.output().clone());
                OrderSpec::via(f, inner).expect("matching alphabets")
            })
            .collect();
        OrderSpec::conj(parts).ok()
    }

    /// Decides `u ⪯ v`.
    pub fn leq(&self, u: &[Letter], v: &[Letter]) -> bool {
        match self {
            OrderSpec::Subword(_) => subword_leq(u, v),
            OrderSpec::Via { f, inner } => inner.leq(&f.apply_word(u), &f.apply_word(v)),
            OrderSpec::Conj(parts) => parts.iter().all(|o| o.leq(u, v)),
            OrderSpec::Labeling(a) => labeling_leq(a, u, v),
            OrderSpec::Mod { d, .. } => mod_leq(*d, u, v),
            OrderSpec::Counting(a) => {
                let (x, y) = (a.eval(u), a.eval(v));
                x.iter().zip(&y).all(|(p, q)| p <= q)
            }
            OrderSpec::Morphism(theta) => morphism_leq(theta, u, v),
        }
    }
}

/// `u ⪯ v` after checking both words are over the order's alphabet.
pub fn order_leq(o: &OrderSpec, u: &[Letter], v: &[Letter]) -> Result<bool> {
    let k = o.alphabet().len();
    if u.iter().chain(v).any(|&a| a >= k) {
        return Err(Error::AlphabetMismatch("word contains a letter outside the order's alphabet".into()));
    }
    Ok(o.leq(u, v))
}

/// Leftmost greedy subsequence test.
pub fn subword_leq(u: &[Letter], v: &[Letter]) -> bool {
    let mut it = v.iter();
    u.iter().all(|a| it.any(|b| b == a))
}

/// `u ⊑_d v`: a strictly monotone letter-preserving map with `α(i) ≡ i mod d`, and `|u| ≡ |v| mod d`.
pub fn mod_leq(d: usize, u: &[Letter], v: &[Letter]) -> bool {
    if u.len() % d != v.len() % d {
        return false;
    }
    let mut j = 0;
    for (i, &a) in u.iter().enumerate() {
        loop {
            if j >= v.len() {
                return false;
            }
            j += 1;
            if v[j - 1] == a && (j - 1) % d == i % d {
                break;
            }
        }
    }
    true
}

/// Equal end states and `run(u) ⊑ run(v)`.
pub fn labeling_leq(a: &LabelingAutomaton, u: &[Letter], v: &[Letter]) -> bool {
    let ru = a.run(u);
    let rv = a.run(v);
    ru.sigma == rv.sigma && subword_leq(&ru.edges, &rv.edges)
}

/// Automaton for `↑w`.
pub fn upward_closure_word(o: &OrderSpec, w: &[Letter]) -> Result<Nfa> {
    let alphabet = o.alphabet().clone();
    match o {
        OrderSpec::Subword(_) => {
            let mut n = Nfa::new(alphabet.clone());
            let states: Vec<_> = (0..=w.len()).map(|_| n.add_state()).collect();
            n.set_initial(states[0]);
            n.set_final(states[w.len()], true);
            for (i, &s) in states.iter().enumerate() {
                for a in alphabet.letters() {
                    n.add_edge(s, Some(a), s);
                }
                if i < w.len() {
                    n.add_edge(s, Some(w[i]), states[i + 1]);
                }
            }
            Ok(n)
        }
        OrderSpec::Via { f, inner } => f.inverse_apply(&upward_closure_word(inner, &f.apply_word(w))?),
        OrderSpec::Conj(parts) => {
            let mut acc = upward_closure_word(&parts[0], w)?;
            for p in &parts[1..] {
                acc = acc.intersect(&upward_closure_word(p, w)?)?.trim();
            }
            Ok(acc)
        }
        OrderSpec::Labeling(a) | OrderSpec::Mod { automaton: a, .. } => Ok(labeling_upward_word(a, w)),
        OrderSpec::Counting(a) => Ok(counting_upward_word(a, w)),
        OrderSpec::Morphism(_) => Err(Error::Unsupported("upward closures of morphism orders".into())),
    }
}

/// Deterministic automaton over states `(s, i)`: `s` is the current state and `i` the number of edges of
/// `run(w)` already matched greedily; acceptance needs all matched and the end state of `w`.
fn labeling_upward_word(a: &LabelingAutomaton, w: &[Letter]) -> Nfa {
    let run = a.run(w);
    let mut n = Nfa::new(a.alphabet().clone());
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let start = n.add_state();
    index.insert((a.initial(), 0), start);
    n.set_initial(start);
    queue.push_back((a.initial(), 0));
    while let Some((s, i)) = queue.pop_front() {
        let src = index[&(s, i)];
        if i == w.len() && s == run.sigma.1 {
            n.set_final(src, true);
        }
        for l in a.alphabet().letters() {
            let s2 = a.next(s, l);
            let i2 = if i < w.len() && run.edges[i] == a.edge_id(s, l) { i + 1 } else { i };
            let dst = *index.entry((s2, i2)).or_insert_with(|| {
                queue.push_back((s2, i2));
                n.add_state()
            });
            n.add_edge(src, Some(l), dst);
        }
    }
    n
}

/// Deterministic automaton tracking the counter vector capped at `A(w)`.
fn counting_upward_word(a: &CountingAutomaton, w: &[Letter]) -> Nfa {
    let target = a.eval(w);
    let cap = |mu: &mut Vec<u64>| mu.iter_mut().zip(&target).for_each(|(m, t)| *m = (*m).min(*t));
    let mut n = Nfa::new(a.alphabet().clone());
    let mut index: HashMap<(usize, Vec<u64>), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let start_key = (a.initial(), vec![0u64; target.len()]);
    let start = n.add_state();
    n.set_initial(start);
    index.insert(start_key.clone(), start);
    queue.push_back(start_key);
    while let Some((q, mu)) = queue.pop_front() {
        let src = index[&(q, mu.clone())];
        let fin: Vec<u64> = mu.iter().zip(a.final_inc(q)).map(|(m, &x)| m + u64::from(x)).collect();
        if fin.iter().zip(&target).all(|(m, t)| m >= t) {
            n.set_final(src, true);
        }
        for l in a.alphabet().letters() {
            let (q2, inc) = a.next(q, l);
            let mut mu2: Vec<u64> = mu.iter().zip(inc).map(|(m, &x)| m + u64::from(x)).collect();
            cap(&mut mu2);
            let key = (q2, mu2);
            let dst = *index.entry(key.clone()).or_insert_with(|| {
                queue.push_back(key);
                n.add_state()
            });
            n.add_edge(src, Some(l), dst);
        }
    }
    n
}

impl fmt::Display for OrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderSpec::Subword(_) => write!(f, "subword"),
            OrderSpec::Via { inner, .. } => write!(f, "via(<transducer>, {inner})"),
            OrderSpec::Conj(parts) => {
                write!(f, "conj(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            OrderSpec::Labeling(a) => write!(f, "labeling(<{} states>)", a.num_states()),
            OrderSpec::Mod { d, .. } => write!(f, "mod:{d}"),
            OrderSpec::Counting(a) => write!(f, "counting(<{} counters>)", a.counters().len()),
            OrderSpec::Morphism(m) => write!(f, "morphism(<{} elements>)", m.monoid.len()),
        }
    }
}
