use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::automata::{CounterAutomaton, Nfa, StateId};
use crate::error::Result;

/// One strongly connected component on the witness path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessComponent {
    pub states: Vec<String>,
    /// Counters incremented by some edge inside the component.
    pub covered: Vec<String>,
}

/// An initial-to-final path through the component graph whose components cover every counter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnboundednessWitness {
    pub path: Vec<WitnessComponent>,
    pub union: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Unboundedness {
    pub unbounded: bool,
    pub witness: Option<UnboundednessWitness>,
}

type Mask = Vec<u64>;

/// A covered-counter mask with a back pointer `(component, index)` to the entry it extends.
type Reach = (Mask, Option<(usize, usize)>);

fn mask_with(m: &mut Mask, c: usize) {
    m[c / 64] |= 1 << (c % 64);
}

fn mask_union(a: &Mask, b: &Mask) -> Mask {
    a.iter().zip(b).map(|(x, y)| x | y).collect()
}

fn mask_subset(a: &Mask, b: &Mask) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn mask_members(m: &Mask, n: usize) -> Vec<usize> {
    (0..n).filter(|&c| m[c / 64] >> (c % 64) & 1 == 1).collect()
}

/// Decides whether `a` (restricted to `L(restrict)` if given) is unbounded: for every `k` some accepted
/// word has a run on which every counter reaches `k`.
///
/// Inside a strongly connected component every edge lies on a cycle, so one closed walk through all of its
/// edges can be repeated at will; edges between components are taken at most once. Hence the automaton is
/// unbounded iff some initial-to-final path through the component graph visits components whose internal
/// edges together increment every counter. With no counters this is plain non-emptiness.
pub fn counter_unbounded(a: &CounterAutomaton, restrict: Option<&Nfa>) -> Result<Unboundedness> {
    let owned;
    let a = match restrict {
        Some(l) => {
            owned = a.restrict(l)?;
            &owned
        }
        None => a,
    };
    let n = a.num_states();
    let nc = a.num_counters();
    let words = nc.div_ceil(64).max(1);
    let useful = useful_states(a);
    let comp = tarjan(a, &useful);
    let ncomp = comp.iter().filter_map(|c| *c).max().map_or(0, |m| m + 1);

    let mut cover: Vec<Mask> = vec![vec![0; words]; ncomp];
    let mut members: Vec<Vec<StateId>> = vec![Vec::new(); ncomp];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for q in 0..n {
        let Some(cq) = comp[q] else { continue };
        members[cq].push(q);
        for e in a.edges_from(q) {
            let Some(ct) = comp[e.to] else { continue };
            if ct == cq {
                for (c, &x) in e.inc.iter().enumerate() {
                    if x > 0 {
                        mask_with(&mut cover[cq], c);
                    }
                }
            } else if !succ[cq].contains(&ct) {
                succ[cq].push(ct);
            }
        }
    }
    let is_final: Vec<bool> = (0..ncomp).map(|c| members[c].iter().any(|&q| a.is_final(q))).collect();
    let full: Mask = {
        let mut m = vec![0; words];
        (0..nc).for_each(|c| mask_with(&mut m, c));
        m
    };

    // Tarjan numbers components in reverse topological order, so descending ids are a topological order.
    // reach[c] holds the ⊆-maximal masks of paths from an initial component into c, with a back pointer.
    let mut reach: Vec<Vec<Reach>> = vec![Vec::new(); ncomp];
    let initial_comps: HashSet<usize> = a.initial().iter().filter_map(|&q| comp[q]).collect();
    for &c in &initial_comps {
        reach[c].push((cover[c].clone(), None));
    }
    let mut found: Option<(usize, usize)> = None;
    for c in (0..ncomp).rev() {
        if is_final[c] {
            if let Some(k) = reach[c].iter().position(|(m, _)| mask_subset(&full, m)) {
                found = Some((c, k));
                break;
            }
        }
        let here = reach[c].clone();
        for &t in &succ[c] {
            for (k, (m, _)) in here.iter().enumerate() {
                let m2 = mask_union(m, &cover[t]);
                if reach[t].iter().any(|(x, _)| mask_subset(&m2, x)) {
                    continue;
                }
                reach[t].retain(|(x, _)| !mask_subset(x, &m2));
                reach[t].push((m2, Some((c, k))));
            }
        }
    }
    let Some((mut c, mut k)) = found else {
        return Ok(Unboundedness { unbounded: false, witness: None });
    };
    let names = |m: &Mask| mask_members(m, nc).into_iter().map(|i| a.counters()[i].clone()).collect::<Vec<_>>();
    let union = names(&reach[c][k].0);
    let mut path = Vec::new();
    loop {
        path.push(WitnessComponent {
            states: members[c].iter().map(|&q| a.name(q).to_string()).collect(),
            covered: names(&cover[c]),
        });
        match reach[c][k].1 {
            Some((pc, pk)) => {
                c = pc;
                k = pk;
            }
            None => break,
        }
    }
    path.reverse();
    Ok(Unboundedness { unbounded: true, witness: Some(UnboundednessWitness { path, union }) })
}

/// States both reachable from an initial state and co-reachable to a final one.
fn useful_states(a: &CounterAutomaton) -> Vec<bool> {
    let n = a.num_states();
    let mut fwd = vec![false; n];
    let mut stack: Vec<StateId> = a.initial().iter().copied().collect();
    for &q in &stack {
        fwd[q] = true;
    }
    let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for q in 0..n {
        for e in a.edges_from(q) {
            rev[e.to].push(q);
        }
    }
    while let Some(q) = stack.pop() {
        for e in a.edges_from(q) {
            if !fwd[e.to] {
                fwd[e.to] = true;
                stack.push(e.to);
            }
        }
    }
    let mut bwd = vec![false; n];
    let mut stack: Vec<StateId> = (0..n).filter(|&q| a.is_final(q)).collect();
    for &q in &stack {
        bwd[q] = true;
    }
    while let Some(q) = stack.pop() {
        for &p in &rev[q] {
            if !bwd[p] {
                bwd[p] = true;
                stack.push(p);
            }
        }
    }
    (0..n).map(|q| fwd[q] && bwd[q]).collect()
}

/// Iterative Tarjan over the useful states; returns component ids in reverse topological order.
fn tarjan(a: &CounterAutomaton, useful: &[bool]) -> Vec<Option<usize>> {
    let n = a.num_states();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![None; n];
    let mut next_index = 0;
    let mut next_comp = 0;
    let succ = |q: StateId| -> Vec<StateId> { a.edges_from(q).iter().map(|e| e.to).filter(|&t| useful[t]).collect() };
    let mut cache: HashMap<StateId, Vec<StateId>> = HashMap::new();
    for root in 0..n {
        if !useful[root] || index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(StateId, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (q, ref mut i)) = call.last_mut() {
            let out = cache.entry(q).or_insert_with(|| succ(q));
            if *i < out.len() {
                let t = out[*i];
                *i += 1;
                if index[t] == usize::MAX {
                    index[t] = next_index;
                    low[t] = next_index;
                    next_index += 1;
                    stack.push(t);
                    on_stack[t] = true;
                    call.push((t, 0));
                } else if on_stack[t] {
                    low[q] = low[q].min(index[t]);
                }
            } else {
                call.pop();
                if let Some(&(p, _)) = call.last() {
                    low[p] = low[p].min(low[q]);
                }
                if low[q] == index[q] {
                    loop {
                        let x = stack.pop().expect("on stack");
                        on_stack[x] = false;
                        comp[x] = Some(next_comp);
                        if x == q {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}
