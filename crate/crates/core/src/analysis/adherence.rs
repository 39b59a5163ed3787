use std::collections::HashMap;

use crate::alphabet::Alphabet;
use crate::automata::{CounterAutomaton, LabelingAutomaton, Nfa, StateId, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::ideals::{ideal_to_nfa, loop_to_subword, Atom, IdealRep, LoopPattern, SubwordIdeal};
use crate::orders::OrderSpec;

use super::closure::downward_closure;
use super::unbounded::counter_unbounded;

/// A counter automaton `A_I` that is unbounded on `L` exactly when `I ∈ Adh(L)`.
pub fn build_adherence_ca(o: &OrderSpec, i: &IdealRep) -> Result<CounterAutomaton> {
    match (o, i) {
        (OrderSpec::Subword(a), IdealRep::Subword(s)) => Ok(subword_adherence_ca(a, s, "")),
        (OrderSpec::Subword(a), IdealRep::Loop(p)) => Ok(subword_adherence_ca(a, &loop_to_subword(p), "")),
        (OrderSpec::Via { f, inner }, IdealRep::Via(j)) => build_adherence_ca(inner, j)?.compose_transducer(f),
        (OrderSpec::Conj(parts), IdealRep::Conj(js)) if parts.len() == js.len() => {
            let mut acc = build_adherence_ca(&parts[0], &js[0])?;
            for (p, j) in parts.iter().zip(js).skip(1) {
                acc = acc.product(&build_adherence_ca(p, j)?)?;
            }
            Ok(rename_counters(acc))
        }
        (OrderSpec::Labeling(a), IdealRep::Loop(p)) => {
            p.validate_for_labeling(a)?;
            Ok(labeling_adherence_ca(a, p))
        }
        (OrderSpec::Mod { d, automaton }, IdealRep::Loop(p)) => {
            p.validate_for_mod(*d)?;
            Ok(labeling_adherence_ca(automaton, p))
        }
        (OrderSpec::Mod { automaton, .. }, IdealRep::Ext(e)) => {
            i.validate(o)?;
            Ok(labeling_adherence_ca(automaton, &e.to_plain()))
        }
        (OrderSpec::Counting(_), _) => build_adherence_ca(&o.conjunction_encoding().expect("counting order"), i),
        _ => Err(Error::Unsupported(format!("adherence automata for this representation under {o}"))),
    }
}

fn rename_counters(ca: CounterAutomaton) -> CounterAutomaton {
    let mut seen: HashMap<String, usize> = HashMap::new();
    let names: Vec<String> = ca
        .counters()
        .iter()
        .map(|c| {
            let k = seen.entry(c.clone()).or_insert(0);
            *k += 1;
            if *k == 1 {
                c.clone()
            } else {
                format!("{c}#{k}")
            }
        })
        .collect();
    ca.with_counter_names(names)
}

/// Membership in the ideal times a nondeterministic matcher of `a₀ w₁^k a₁ ⋯ w_n^k a_n ⊑ w`, where `w_i`
/// lists the letters of `Γ_i`. The matcher holds one counter per star, bumped each time `w_i` is matched
/// completely; a star is left only between copies.
pub(crate) fn subword_adherence_ca(alphabet: &Alphabet, s: &SubwordIdeal, prefix: &str) -> CounterAutomaton {
    let stars: Vec<usize> = s.atoms.iter().enumerate().filter(|(_, a)| matches!(a, Atom::Star(_))).map(|(k, _)| k).collect();
    let counters = (1..=stars.len()).map(|k| format!("{prefix}star{k}")).collect();
    let mut ca = CounterAutomaton::new(alphabet.clone(), counters);
    let nc = stars.len();
    // state (atom index, offset inside the star's word)
    let mut ids: HashMap<(usize, usize), StateId> = HashMap::new();
    let mut id = |ca: &mut CounterAutomaton, k: usize, j: usize| {
        *ids.entry((k, j)).or_insert_with(|| ca.add_named_state(format!("m{k}.{j}")))
    };
    let n = s.atoms.len();
    let start = id(&mut ca, 0, 0);
    ca.set_initial(start);
    let end = id(&mut ca, n, 0);
    ca.set_final(end, true);
    for (k, atom) in s.atoms.iter().enumerate() {
        match atom {
            Atom::Opt(a) => {
                let src = id(&mut ca, k, 0);
                let dst = id(&mut ca, k + 1, 0);
                ca.add_edge(src, Some(*a), vec![0; nc], dst);
            }
            Atom::Star(g) => {
                let w: Vec<_> = g.iter().copied().collect();
                let c = stars.iter().position(|&x| x == k).expect("star index");
                for j in 0..w.len() {
                    let src = id(&mut ca, k, j);
                    if j + 1 == w.len() {
                        let dst = id(&mut ca, k, 0);
                        ca.add_unit_edge(src, Some(w[j]), c, dst);
                    } else {
                        let dst = id(&mut ca, k, j + 1);
                        ca.add_edge(src, Some(w[j]), vec![0; nc], dst);
                    }
                }
                let src = id(&mut ca, k, 0);
                let dst = id(&mut ca, k + 1, 0);
                ca.add_edge(src, None, vec![0; nc], dst);
            }
        }
    }
    // unmatched letters of w are skipped anywhere
    for q in 0..ca.num_states() {
        for a in alphabet.letters() {
            ca.add_edge(q, Some(a), vec![0; nc], q);
        }
    }
    let member = s.to_nfa(alphabet).minimize(DEFAULT_STATE_CAP).expect("ideal automata are small");
    ca.restrict(&member).expect("same alphabet")
}

/// `⊑_A` is the conjunction of `σ`-equality and the subword order on runs. The `σ`-part is a class filter
/// on the end state; the run part pulls back the subword construction for the run ideal (connector edges
/// optional, loop edges starred) along the run map.
fn labeling_adherence_ca(a: &LabelingAutomaton, p: &LoopPattern) -> CounterAutomaton {
    let mut atoms = Vec::new();
    let mut q = a.initial();
    let push_opt = |atoms: &mut Vec<Atom>, q: &mut StateId, w: &[usize]| {
        let r = a.run_from(*q, w);
        atoms.extend(r.edges.iter().map(|&e| Atom::Opt(e)));
        *q = r.sigma.1;
    };
    push_opt(&mut atoms, &mut q, &p.connectors[0]);
    for (v, u) in p.loops.iter().zip(&p.connectors[1..]) {
        let r = a.run_from(q, v);
        atoms.push(Atom::Star(r.edges.iter().copied().collect()));
        push_opt(&mut atoms, &mut q, u);
    }
    let runs = SubwordIdeal { atoms };
    let inner = subword_adherence_ca(&a.edge_alphabet(), &runs, "");
    let pulled = inner.compose_transducer(&a.run_transducer()).expect("run transducer matches");
    pulled.restrict(&a.class_filter(q)).expect("same alphabet")
}

/// `I ∈ Adh_o(L)` via the adherence automaton and the unboundedness test.
pub fn adherence_member(o: &OrderSpec, i: &IdealRep, l: &Nfa) -> Result<bool> {
    let ca = build_adherence_ca(o, i)?;
    Ok(counter_unbounded(&ca, Some(l))?.unbounded)
}

/// `I ∈ Adh_o(L)` via the characterization `I ⊆ ↓(L ∩ I)`.
pub fn adherence_member_by_closure(o: &OrderSpec, i: &IdealRep, l: &Nfa) -> Result<bool> {
    let ideal = ideal_to_nfa(o, i)?;
    let meet = l.intersect(&ideal.remove_epsilon())?.trim();
    let closed = downward_closure(o, &meet)?;
    ideal.is_subset_of(&closed, DEFAULT_STATE_CAP)
}
