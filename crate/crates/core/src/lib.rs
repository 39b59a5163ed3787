//! Parameterized well-quasi-orderings on words and the decision procedures they support for
//! regular languages: upward and downward closures, ideal decompositions, adherence membership
//! through counter-automaton unboundedness, and separability by piecewise testable languages,
//! including the modular-predicate fragment.

pub mod alphabet;
pub mod analysis;
pub mod automata;
pub mod cli;
pub mod error;
pub mod ideals;
pub mod orders;
pub mod separability;
pub mod testkit;

pub use alphabet::{Alphabet, Letter, Word};
pub use error::{Error, Result};
