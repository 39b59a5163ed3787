use num_bigint::BigUint;
use serde::Serialize;

use crate::automata::Nfa;
use crate::error::Result;
use crate::orders::OrderSpec;

use super::ptl::{ptl_separate_with, SeparabilityVerdict, SeparationOptions};

/// `2·(m³)!`, the modulus beyond which larger moduli add no separating power for inputs with at
/// most `m` states.
pub fn mod_bound(m: usize) -> BigUint {
    let n = m.pow(3);
    (1..=n).fold(BigUint::from(2u32), |acc, i| acc * BigUint::from(i))
}

/// Separability by boolean combinations of `↑_d w` at a fixed modulus `d`. Candidate loops on the
/// ideal side have period at most `m²` for `m` the larger state count.
pub fn mod_separate_fixed(d: usize, k: &Nfa, l: &Nfa, budget: usize) -> Result<SeparabilityVerdict> {
    let mut opts = SeparationOptions::with_budget(budget);
    mod_separate_fixed_with(d, k, l, &mut opts)
}

pub fn mod_separate_fixed_with(d: usize, k: &Nfa, l: &Nfa, opts: &mut SeparationOptions) -> Result<SeparabilityVerdict> {
    let m = k.num_states().max(l.num_states());
    let o = OrderSpec::modulo(d, k.alphabet().clone())?;
    opts.enumeration.max_period = Some(m * m);
    ptl_separate_with(&o, k, l, opts)
}

#[derive(Clone, Debug)]
pub struct ModSeparation {
    pub verdict: SeparabilityVerdict,
    /// The modulus the verdict was obtained at.
    pub d_used: usize,
    /// Whether the verdict holds for all moduli, not only `d_used`.
    pub definitive: bool,
    pub bound: BigUint,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModSeparationReport {
    pub verdict: super::ptl::VerdictReport,
    pub d_used: usize,
    pub definitive: bool,
    pub bound: String,
}

impl ModSeparation {
    pub fn report(&self, k: &Nfa) -> Result<ModSeparationReport> {
        let o = OrderSpec::modulo(self.d_used, k.alphabet().clone())?;
        Ok(ModSeparationReport {
            verdict: self.verdict.report(&o),
            d_used: self.d_used,
            definitive: self.definitive,
            bound: self.bound.to_string(),
        })
    }
}

/// Moduli tried when the bound is out of reach: each one has many divisors, so a separator found
/// at a small modulus reappears at the later ones.
const LADDER: &[usize] = &[1, 2, 4, 6, 12, 24, 36, 48, 60, 120, 180, 240, 360, 720, 840, 1260, 1680, 2520, 5040];

/// Separability by boolean combinations of `↑_d w` for any `d`. If the bound `2·(m³)!` is at most
/// `cap` the answer at the bound is final. Otherwise moduli from a fixed ladder up to `cap` are
/// tried: a separator at any of them is final, an inseparability certificate is not.
pub fn mod_separate(k: &Nfa, l: &Nfa, cap: usize, budget: usize) -> Result<ModSeparation> {
    let m = k.num_states().max(l.num_states());
    let bound = mod_bound(m);
    if bound <= BigUint::from(cap) {
        let d: usize = bound.to_string().parse().expect("bound fits below the cap");
        let verdict = mod_separate_fixed(d, k, l, budget)?;
        let definitive = !verdict.is_inconclusive();
        return Ok(ModSeparation { verdict, d_used: d, definitive, bound });
    }
    let mut last = None;
    for &d in LADDER.iter().filter(|&&d| d <= cap) {
        let verdict = mod_separate_fixed(d, k, l, budget)?;
        if verdict.is_separable() {
            return Ok(ModSeparation { verdict, d_used: d, definitive: true, bound });
        }
        if verdict.is_inseparable() || last.is_none() {
            last = Some((verdict, d));
        }
    }
    let (verdict, d_used) = last.unwrap_or((SeparabilityVerdict::Inconclusive { budget }, 0));
    Ok(ModSeparation { verdict, d_used, definitive: false, bound })
}
