use std::collections::HashMap;

use crate::alphabet::{Alphabet, Letter, Word};
use crate::automata::{CounterAutomaton, Nfa, StateId};
use crate::error::{Error, Result};
use crate::ideals::{kappa, rotate, Direction, ExtLoopPattern, IdealRep, LoopPattern};
use crate::orders::{upward_closure_word, OrderSpec};

use super::closure::downward_closure;
use super::unbounded::counter_unbounded;

/// Whether a loop pattern (`Loop`, plain association) or an extended one (`Ext`) over `M_d` is associated
/// to `L`: for every `k` some word of `L` splits as `ū₀v̄₁ū₁⋯v̄_nū_n` with `v_i^k w_i ⊑_d v̄_i ∈ ↓_d v_i^{[r_i]}`
/// and connector segments as the definition requires. Decided by unboundedness of a segment-by-segment
/// counter automaton with one counter per loop.
pub fn association_check(o: &OrderSpec, p: &IdealRep, l: &Nfa) -> Result<bool> {
    let OrderSpec::Mod { d, .. } = o else {
        return Err(Error::InvalidPattern("association is defined for M_d patterns".into()));
    };
    p.validate(o)?;
    let ca = match p {
        IdealRep::Loop(q) => plain_association_ca(o, *d, q)?,
        IdealRep::Ext(e) => ext_association_ca(o, *d, e)?,
        _ => return Err(Error::InvalidPattern("association needs a loop pattern".into())),
    };
    Ok(counter_unbounded(&ca, Some(l))?.unbounded)
}

fn plain_association_ca(o: &OrderSpec, d: usize, p: &LoopPattern) -> Result<CounterAutomaton> {
    let alphabet = o.alphabet();
    let n = p.num_loops();
    let u = &p.connectors;
    let v = &p.loops;
    let star = |w: &Word| Nfa::from_word(alphabet.clone(), w).star();
    let word = |w: &Word| Nfa::from_word(alphabet.clone(), w);
    let mut segments = Vec::new();
    for i in 0..=n {
        let seg = if n == 0 {
            word(&u[0])
        } else {
            // generators: u₀v₁*, v_i*u_iv_{i+1}*, v_n*u_n
            let mut g = word(&u[i]);
            if i > 0 {
                g = star(&v[i - 1]).concat(&g)?;
            }
            if i < n {
                g = g.concat(&star(&v[i]))?;
            }
            downward_closure(o, &g)?.intersect(&upward_closure_word(o, &u[i])?)?.trim()
        };
        segments.push(CounterAutomaton::from_nfa(&seg));
        if i < n {
            segments.push(loop_segment_ca(alphabet, d, &v[i], 0, i + 1));
        }
    }
    concat_all(segments)
}

fn ext_association_ca(o: &OrderSpec, d: usize, e: &ExtLoopPattern) -> Result<CounterAutomaton> {
    let alphabet = o.alphabet();
    let n = e.num_loops();
    let u = e.connectors();
    let v = e.loops();
    let mut segments = Vec::new();
    for i in 0..=n {
        let seg = if i == 0 || i == n || !u[i].is_empty() {
            Nfa::from_word(alphabet.clone(), &u[i])
        } else {
            let left = Nfa::from_word(alphabet.clone(), &rotate(&v[i - 1], Direction::Left, e.residues[i - 1])).star();
            let right = Nfa::from_word(alphabet.clone(), &v[i]).star();
            downward_closure(o, &left.concat(&right)?)?
        };
        segments.push(CounterAutomaton::from_nfa(&seg));
        if i < n {
            segments.push(loop_segment_ca(alphabet, d, &v[i], e.residues[i], i + 1));
        }
    }
    concat_all(segments)
}

fn concat_all(segments: Vec<CounterAutomaton>) -> Result<CounterAutomaton> {
    let mut it = segments.into_iter();
    let mut acc = it.next().expect("at least one segment");
    for s in it {
        acc = acc.concat(&s)?;
    }
    Ok(acc)
}

/// Segment automaton for `v̄` with `v^k w ⊑_d v̄ ∈ ↓_d v^{[r]}`, `w` the length-`r` prefix of `v`.
/// A state `(j, t, ρ)` records the next loop offset `j` (while copying loops) or the matched prefix length
/// `t` of `w`, and the residue `ρ` of the next position of `v̄`. Letters outside `κ_d(v)` at that residue
/// are rejected, which enforces ideal membership; the single counter counts completed copies of `v`.
fn loop_segment_ca(alphabet: &Alphabet, d: usize, v: &[Letter], r: usize, index: usize) -> CounterAutomaton {
    let prof = kappa(d, v);
    let w = &v[..r];
    let mut ca = CounterAutomaton::new(alphabet.clone(), vec![format!("loop{index}")]);
    // phase: Some(j) = inside copies at offset j; None = matching w, with t letters done
    let mut ids: HashMap<(Option<usize>, usize, usize), StateId> = HashMap::new();
    let mut stack = Vec::new();
    let mut id = |ca: &mut CounterAutomaton, stack: &mut Vec<(Option<usize>, usize, usize)>, key: (Option<usize>, usize, usize)| {
        *ids.entry(key).or_insert_with(|| {
            stack.push(key);
            let s = ca.add_named_state(format!("{key:?}"));
            ca.set_final(s, key.0.is_none() && key.1 == w.len() && key.2 == r % d);
            s
        })
    };
    let start = id(&mut ca, &mut stack, (Some(0), 0, 0));
    ca.set_initial(start);
    while let Some(key @ (phase, t, rho)) = stack.pop() {
        let src = id(&mut ca, &mut stack, key);
        let allowed = prof.at(rho + 1).clone();
        for &x in &allowed {
            let skip = id(&mut ca, &mut stack, (phase, t, (rho + 1) % d));
            ca.add_edge(src, Some(x), vec![0], skip);
            match phase {
                Some(j) if v[j] == x && j % d == rho => {
                    if j + 1 == v.len() {
                        let dst = id(&mut ca, &mut stack, (Some(0), 0, (rho + 1) % d));
                        ca.add_edge(src, Some(x), vec![1], dst);
                    } else {
                        let dst = id(&mut ca, &mut stack, (Some(j + 1), 0, (rho + 1) % d));
                        ca.add_edge(src, Some(x), vec![0], dst);
                    }
                }
                None if t < w.len() && w[t] == x && t % d == rho => {
                    let dst = id(&mut ca, &mut stack, (None, t + 1, (rho + 1) % d));
                    ca.add_edge(src, Some(x), vec![0], dst);
                }
                _ => {}
            }
        }
        if phase == Some(0) {
            let dst = id(&mut ca, &mut stack, (None, 0, rho));
            ca.add_edge(src, None, vec![0], dst);
        }
    }
    ca
}
