//! Finite automata, sequential transducers, labeling automata and counter automata.

pub mod counter;
pub mod dfa;
pub mod format;
pub mod labeling;
pub mod nfa;
pub mod regex;
pub mod transducer;

pub use counter::{CaEdge, CounterAutomaton, CountingAutomaton};
pub use dfa::Dfa;
pub use labeling::{is_unambiguous, LabelingAutomaton, LabelingRun};
pub use nfa::{Nfa, StateId, DEFAULT_STATE_CAP};
pub use regex::parse_regex;
pub use transducer::SequentialTransducer;

use crate::error::Result;

/// The operations of the regular-language algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegularOp {
    Union,
    Intersect,
    Concat,
    Star,
    Complement,
    Determinize,
    Minimize,
    IsEmpty,
    Includes,
    Equivalent,
}

/// Result of [`regular_algebra`]: an automaton or a verdict.
#[derive(Clone, Debug)]
pub enum AlgebraResult {
    Automaton(Nfa),
    Verdict(bool),
}

/// Applies `op`; binary operations need `b`. `Includes` decides `L(b) ⊆ L(a)`.
pub fn regular_algebra(op: RegularOp, a: &Nfa, b: Option<&Nfa>, cap: usize) -> Result<AlgebraResult> {
    use AlgebraResult::{Automaton, Verdict};
    let need_b = || {
        b.ok_or_else(|| crate::error::Error::Precondition(format!("{op:?} needs a second automaton")))
    };
    Ok(match op {
        RegularOp::Union => Automaton(a.union(need_b()?)?),
        RegularOp::Intersect => Automaton(a.intersect(need_b()?)?),
        RegularOp::Concat => Automaton(a.concat(need_b()?)?),
        RegularOp::Star => Automaton(a.star()),
        RegularOp::Complement => Automaton(a.complement(cap)?),
        RegularOp::Determinize => Automaton(a.determinize(cap)?.to_nfa()),
        RegularOp::Minimize => Automaton(a.minimize(cap)?),
        RegularOp::IsEmpty => Verdict(a.is_empty()),
        RegularOp::Includes => Verdict(need_b()?.is_subset_of(a, cap)?),
        RegularOp::Equivalent => Verdict(a.equivalent(need_b()?, cap)?),
    })
}
