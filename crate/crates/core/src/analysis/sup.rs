use crate::alphabet::Letter;
use crate::automata::{Nfa, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::orders::OrderSpec;

use super::closure::downward_closure;

/// The simultaneous unboundedness problem for `L ⊆ a₁*⋯a_n*`: is `a₁*⋯a_n* ⊆ ↓L`?
pub fn sup_decide(l: &Nfa, letters: &[Letter]) -> Result<bool> {
    let alphabet = l.alphabet().clone();
    let mut shape = Nfa::from_word(alphabet.clone(), &[]);
    for &a in letters {
        if a >= alphabet.len() {
            return Err(Error::AlphabetMismatch("SUP letter outside the alphabet".into()));
        }
        shape = shape.concat(&Nfa::star_of(alphabet.clone(), &[a]))?;
    }
    if !l.is_subset_of(&shape, DEFAULT_STATE_CAP)? {
        return Err(Error::Precondition("the language is not contained in a₁*⋯a_n*".into()));
    }
    let closed = downward_closure(&OrderSpec::subword(alphabet), l)?;
    shape.is_subset_of(&closed, DEFAULT_STATE_CAP)
}
