//! Separation of regular languages by boolean combinations of upward closures.
//!
//! Both sides of the decision are searched in rounds of growing size: one looks for a separating
//! formula, the other for an ideal lying in the adherence of both inputs. Whatever is found is
//! checked again before it is returned.

mod formula;
mod modsep;
mod ptl;

pub use formula::{formula_to_nfa, verify_separator, PtlFormula};
pub use modsep::{mod_bound, mod_separate, mod_separate_fixed, mod_separate_fixed_with, ModSeparation, ModSeparationReport};
pub use ptl::{family_separate, is_ptl, ptl_separate, ptl_separate_with, SeparabilityVerdict, SeparationOptions, VerdictReport};
