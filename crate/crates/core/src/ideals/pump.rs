use serde::Serialize;

use crate::alphabet::{Letter, Word};
use crate::analysis::adherence_member;
use crate::automata::{Nfa, StateId};
use crate::error::{Error, Result};
use crate::orders::OrderSpec;

use super::kappa::{in_loop_ideal, kappa, period};
use super::{ext_loops_irreducible_in, ExtLoopPattern, IdealRep, LoopPattern};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PumpStrategy {
    /// `ℓ = 1`: nothing to pump.
    Identity,
    /// The factor `u[start..start + len]` is read on a cycle and was repeated `repeats` times in total.
    Block { start: usize, len: usize, repeats: usize },
    /// No single block worked; the word was found by an exact-length search.
    Search,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PumpedWord {
    pub word: Word,
    pub strategy: PumpStrategy,
}

/// True iff `n!` divides `d` (for `d > 0`).
pub fn factorial_divides(n: usize, d: usize) -> bool {
    let mut f: usize = 1;
    for k in 2..=n {
        match f.checked_mul(k) {
            Some(g) if g <= d => f = g,
            _ => return false,
        }
    }
    d.is_multiple_of(f)
}

fn check_loop(d: usize, v: &[Letter]) -> Result<()> {
    if d == 0 {
        return Err(Error::Precondition("d must be positive".into()));
    }
    if v.is_empty() || !v.len().is_multiple_of(d) {
        return Err(Error::Precondition(format!("loop length {} is not a positive multiple of d = {d}", v.len())));
    }
    Ok(())
}

/// States of one accepting run of `a` on `u`, or `None`.
fn accepting_run(a: &Nfa, u: &[Letter]) -> Option<Vec<StateId>> {
    let mut layers = vec![a.initial().clone()];
    for &x in u {
        let next = layers.last().expect("non-empty").iter().flat_map(|&q| a.edges_from(q)).filter(|(l, _)| *l == Some(x)).map(|&(_, t)| t).collect();
        layers.push(next);
    }
    let mut q = *layers[u.len()].iter().find(|&&q| a.is_final(q))?;
    let mut run = vec![q];
    for i in (0..u.len()).rev() {
        q = *layers[i].iter().find(|&&p| a.edges_from(p).contains(&(Some(u[i]), q)))?;
        run.push(q);
    }
    run.reverse();
    Some(run)
}

/// Automaton for `↓_D w^{[r]}` via the residue-profile characterization.
fn profile_nfa(a: &Nfa, big_d: usize, w: &[Letter], r: usize) -> Nfa {
    let prof = kappa(big_d, w);
    let mut n = Nfa::new(a.alphabet().clone());
    let states: Vec<StateId> = (0..big_d).map(|_| n.add_state()).collect();
    n.set_initial(states[0]);
    n.set_final(states[r % big_d], true);
    for s in 0..big_d {
        for &x in &prof.sets[s] {
            n.add_edge(states[s], Some(x), states[(s + 1) % big_d]);
        }
    }
    n
}

/// Lengthens `u ∈ L(a) ∩ ↓_d v^{[r]}` by `(ℓ − 1)d` letters staying in `L(a)` and in the
/// `⊑_{ℓd}`-ideal of `v^ℓ` at the new residue. The residue reported for the target ideal is the
/// new length modulo `ℓd`.
#[allow(clippy::too_many_arguments)]
pub fn pump_word_up(a: &Nfa, m: usize, d: usize, v: &[Letter], r: usize, u: &[Letter], ell: usize) -> Result<PumpedWord> {
    check_loop(d, v)?;
    if ell == 0 {
        return Err(Error::Precondition("ℓ must be positive".into()));
    }
    let a = a.remove_epsilon();
    if a.num_states() > m {
        return Err(Error::Precondition(format!("automaton has {} states, more than m = {m}", a.num_states())));
    }
    if !a.accepts(u) {
        return Err(Error::Precondition("u is not accepted".into()));
    }
    if !factorial_divides(m.pow(3), d) {
        return Err(Error::Precondition(format!("d = {d} is not a multiple of (m³)! for m = {m}")));
    }
    let p = period(d, v);
    if p > m * m {
        return Err(Error::Precondition(format!("period {p} of the loop exceeds m² = {}", m * m)));
    }
    if !in_loop_ideal(d, v, r, u) {
        return Err(Error::Precondition("u is not in the ideal of the loop".into()));
    }
    if u.len() < m * p {
        return Err(Error::Precondition(format!("|u| = {} is shorter than m·period = {}", u.len(), m * p)));
    }
    if ell == 1 {
        return Ok(PumpedWord { word: u.to_vec(), strategy: PumpStrategy::Identity });
    }
    let big_d = ell * d;
    let extra = (ell - 1) * d;
    let target_len = u.len() + extra;
    let vl: Word = v.repeat(ell);
    let ok = |w: &[Letter]| w.len() == target_len && a.accepts(w) && in_loop_ideal(big_d, &vl, w.len() % big_d, w);
    let run = accepting_run(&a, u).expect("u is accepted");
    for start in 0..u.len() {
        for end in start + 1..=u.len() {
            let len = end - start;
            if run[start] != run[end] || len % p != 0 || !extra.is_multiple_of(len) {
                continue;
            }
            let repeats = 1 + extra / len;
            let mut w = u[..start].to_vec();
            for _ in 0..repeats {
                w.extend_from_slice(&u[start..end]);
            }
            w.extend_from_slice(&u[end..]);
            if ok(&w) {
                return Ok(PumpedWord { word: w, strategy: PumpStrategy::Block { start, len, repeats } });
            }
        }
    }
    let target = a.intersect(&profile_nfa(&a, big_d, &vl, target_len % big_d))?;
    match target.find_word_of_length(target_len) {
        Some(w) if ok(&w) => Ok(PumpedWord { word: w, strategy: PumpStrategy::Search }),
        _ => Err(Error::Certification(format!("no word of length {target_len} in the pumped ideal is accepted"))),
    }
}

/// Lifts an ideal in the `⊑_d`-adherence of `L(a)` to `⊑_{ℓd}` by replacing every loop `v_i` with
/// `v_i^ℓ`, keeping connectors and residues. The result is certified by the adherence engine.
pub fn pump_pattern(a: &Nfa, m: usize, d: usize, p: &ExtLoopPattern, ell: usize) -> Result<ExtLoopPattern> {
    if ell == 0 || d == 0 {
        return Err(Error::Precondition("d and ℓ must be positive".into()));
    }
    if a.num_states() > m {
        return Err(Error::Precondition(format!("automaton has {} states, more than m = {m}", a.num_states())));
    }
    if !d.is_multiple_of(2) || !factorial_divides(m.pow(3), d / 2) {
        return Err(Error::Precondition(format!("d = {d} is not a multiple of 2·(m³)! for m = {m}")));
    }
    let o = OrderSpec::modulo(d, a.alphabet().clone())?;
    let rep = IdealRep::Ext(p.clone());
    rep.validate(&o)?;
    if let Some(v) = p.loops().iter().find(|v| period(d, v) > m * m) {
        return Err(Error::Precondition(format!("loop period {} exceeds m² = {}", period(d, v), m * m)));
    }
    if !ext_loops_irreducible_in(&o, p)? {
        return Err(Error::Precondition("pattern has a redundant loop".into()));
    }
    if !adherence_member(&o, &rep, a)? {
        return Err(Error::Precondition(format!("ideal is not in the adherence at d = {d}")));
    }
    let loops = p.loops().iter().map(|v| v.repeat(ell)).collect();
    let lifted = ExtLoopPattern::new(LoopPattern::new(p.connectors().to_vec(), loops)?, p.residues.clone(), ell * d)?;
    let o_big = OrderSpec::modulo(ell * d, a.alphabet().clone())?;
    if !adherence_member(&o_big, &IdealRep::Ext(lifted.clone()), a)? {
        return Err(Error::Certification(format!("lifted ideal is not in the adherence at d = {}", ell * d)));
    }
    Ok(lifted)
}
