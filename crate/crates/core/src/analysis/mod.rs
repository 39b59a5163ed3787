//! Closures, counter-automaton unboundedness, adherence membership and association.

pub mod adherence;
pub mod association;
pub mod closure;
pub mod sup;
pub mod unbounded;

pub use adherence::{adherence_member, adherence_member_by_closure, build_adherence_ca};
pub use association::association_check;
pub use closure::{conj_downward, downward_closure, downward_closure_with_budget, upward_closure, DEFAULT_CLOSURE_BUDGET};
pub use sup::sup_decide;
pub use unbounded::{counter_unbounded, Unboundedness, UnboundednessWitness, WitnessComponent};
