use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::alphabet::{Alphabet, Letter, Word};
use crate::analysis::downward_closure;
use crate::automata::{Dfa, LabelingAutomaton, Nfa, StateId, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::orders::OrderSpec;

use super::kappa::{period_of_profile, KappaProfile};
use super::{ideal_to_nfa, Atom, ExtLoopPattern, IdealRep, LoopPattern, SubwordIdeal};

/// Knobs for [`enumerate_ideals_with`].
#[derive(Clone, Debug)]
pub struct EnumOptions {
    /// For `M_d`: only loops whose profile period is at most this.
    pub max_period: Option<usize>,
    /// Stop with [`Error::StateCap`] after this many raw candidates.
    pub cap: usize,
    /// For `M_d`: keep only patterns meeting the boundary-letter conditions.
    pub boundary_filter: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        Self { max_period: None, cap: 200_000, boundary_filter: true }
    }
}

/// Ideals of `o` up to size `budget` that lie below `↓h` for every hint `h`, smallest first and without
/// two candidates of equal language. Size counts atoms for subword ideals and `Σ|u_i| + n` for patterns.
pub fn enumerate_ideals(o: &OrderSpec, budget: usize, hints: &[&Nfa]) -> Result<Vec<IdealRep>> {
    enumerate_ideals_with(o, budget, hints, &EnumOptions::default())
}

pub fn enumerate_ideals_with(o: &OrderSpec, budget: usize, hints: &[&Nfa], opts: &EnumOptions) -> Result<Vec<IdealRep>> {
    let raw = match o {
        OrderSpec::Subword(a) => {
            let c = ceiling(o, hints)?;
            subword_candidates(a, &c, budget, opts)?.into_iter().map(IdealRep::Subword).collect()
        }
        OrderSpec::Mod { d, automaton } => {
            let c = ceiling(o, hints)?;
            mod_candidates(automaton.alphabet(), *d, &c, budget, opts)?.into_iter().map(IdealRep::Ext).collect()
        }
        OrderSpec::Labeling(a) => {
            let c = ceiling(o, hints)?;
            labeling_candidates(a, &c, budget, opts)?.into_iter().map(IdealRep::Loop).collect()
        }
        OrderSpec::Via { f, inner } => {
            let images: Vec<Nfa> = hints.iter().map(|h| f.apply(h)).collect::<Result<_>>()?;
            let refs: Vec<&Nfa> = images.iter().collect();
            let mut out = Vec::new();
            for j in enumerate_ideals_with(inner, budget, &refs, opts)? {
                let rep = IdealRep::Via(Box::new(j));
                if rep.validate(o).is_ok() {
                    out.push(rep);
                }
            }
            out
        }
        OrderSpec::Conj(parts) => {
            let per: Vec<Vec<IdealRep>> =
                parts.iter().map(|p| enumerate_ideals_with(p, budget, hints, opts)).collect::<Result<_>>()?;
            let mut out = Vec::new();
            let mut tuple = Vec::with_capacity(parts.len());
            conj_tuples(o, &per, &mut tuple, &mut out, opts.cap)?;
            out
        }
        OrderSpec::Counting(_) => {
            return enumerate_ideals_with(&o.conjunction_encoding().expect("counting order"), budget, hints, opts)
        }
        OrderSpec::Morphism(_) => return Err(Error::Unsupported("ideals of morphism orders".into())),
    };
    dedupe(o, raw)
}

fn conj_tuples(o: &OrderSpec, per: &[Vec<IdealRep>], tuple: &mut Vec<IdealRep>, out: &mut Vec<IdealRep>, cap: usize) -> Result<()> {
    if tuple.len() == per.len() {
        if out.len() >= cap {
            return Err(Error::StateCap { cap, during: "conjunction ideal enumeration" });
        }
        let rep = IdealRep::Conj(tuple.clone());
        if rep.validate(o).is_ok() {
            out.push(rep);
        }
        return Ok(());
    }
    for i in &per[tuple.len()] {
        tuple.push(i.clone());
        conj_tuples(o, per, tuple, out, cap)?;
        tuple.pop();
    }
    Ok(())
}

/// Keeps the first candidate of each language.
fn dedupe(o: &OrderSpec, raw: Vec<IdealRep>) -> Result<Vec<IdealRep>> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    for i in raw {
        let key = ideal_to_nfa(o, &i)?.determinize(DEFAULT_STATE_CAP)?.canonical_key();
        if seen.insert(key) {
            out.push(i);
        }
    }
    Ok(out)
}

/// Deterministic automaton for `⋂ ↓h` (everything if there are no hints).
fn ceiling(o: &OrderSpec, hints: &[&Nfa]) -> Result<Dfa> {
    let mut acc = Nfa::universal(o.alphabet().clone());
    for h in hints {
        acc = acc.intersect(&downward_closure(o, h)?)?.trim();
    }
    Ok(acc.determinize(DEFAULT_STATE_CAP)?.minimize())
}

/// Tracks the set of ceiling states reachable by generator words read so far.
struct Tracker<'a> {
    c: &'a Dfa,
    dead: Vec<bool>,
}

impl<'a> Tracker<'a> {
    fn new(c: &'a Dfa) -> Self {
        let n = c.num_states();
        let k = c.alphabet().len();
        let mut live: Vec<bool> = (0..n).map(|q| c.is_final(q)).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for q in 0..n {
                if !live[q] && (0..k).any(|a| live[c.next(q, a)]) {
                    live[q] = true;
                    changed = true;
                }
            }
        }
        Tracker { c, dead: live.iter().map(|l| !l).collect() }
    }

    fn start(&self) -> BTreeSet<StateId> {
        BTreeSet::from([self.c.initial()])
    }

    fn word(&self, s: &BTreeSet<StateId>, w: &[Letter]) -> BTreeSet<StateId> {
        s.iter().map(|&q| self.c.run_from(q, w)).collect()
    }

    /// States reachable from `s` by words of `(v)*`.
    fn star_word(&self, s: &BTreeSet<StateId>, v: &[Letter]) -> BTreeSet<StateId> {
        let mut out = s.clone();
        let mut frontier: Vec<StateId> = s.iter().copied().collect();
        while let Some(q) = frontier.pop() {
            let r = self.c.run_from(q, v);
            if out.insert(r) {
                frontier.push(r);
            }
        }
        out
    }

    /// States reachable from `s` by words over `g`.
    fn star_letters(&self, s: &BTreeSet<StateId>, g: &BTreeSet<Letter>) -> BTreeSet<StateId> {
        let mut out = s.clone();
        let mut frontier: Vec<StateId> = s.iter().copied().collect();
        while let Some(q) = frontier.pop() {
            for &a in g {
                let r = self.c.next(q, a);
                if out.insert(r) {
                    frontier.push(r);
                }
            }
        }
        out
    }

    fn viable(&self, s: &BTreeSet<StateId>) -> bool {
        s.iter().all(|&q| !self.dead[q])
    }

    fn accepting(&self, s: &BTreeSet<StateId>) -> bool {
        s.iter().all(|&q| self.c.is_final(q))
    }
}

fn nonempty_subsets(k: usize) -> Vec<BTreeSet<Letter>> {
    (1u32..(1 << k)).map(|m| (0..k).filter(|&a| m >> a & 1 == 1).collect()).collect()
}

fn subword_candidates(alphabet: &Alphabet, c: &Dfa, budget: usize, opts: &EnumOptions) -> Result<Vec<SubwordIdeal>> {
    let t = Tracker::new(c);
    let mut atoms_pool: Vec<Atom> = nonempty_subsets(alphabet.len()).into_iter().map(Atom::Star).collect();
    atoms_pool.extend(alphabet.letters().map(Atom::Opt));
    let mut out = Vec::new();
    for size in 0..=budget {
        let mut cur = Vec::new();
        subword_dfs(&t, &atoms_pool, &t.start(), size, &mut cur, &mut out, opts.cap)?;
    }
    Ok(out)
}

fn subword_dfs(
    t: &Tracker,
    pool: &[Atom],
    s: &BTreeSet<StateId>,
    left: usize,
    cur: &mut Vec<Atom>,
    out: &mut Vec<SubwordIdeal>,
    cap: usize,
) -> Result<()> {
    if !t.viable(s) {
        return Ok(());
    }
    if left == 0 {
        let ideal = SubwordIdeal { atoms: cur.clone() };
        if t.accepting(s) && ideal.is_normal() {
            if out.len() >= cap {
                return Err(Error::StateCap { cap, during: "subword ideal enumeration" });
            }
            out.push(ideal);
        }
        return Ok(());
    }
    for atom in pool {
        let next = match atom {
            Atom::Opt(a) => {
                let mut n = s.clone();
                n.extend(t.word(s, &[*a]));
                n
            }
            Atom::Star(g) => t.star_letters(s, g),
        };
        cur.push(atom.clone());
        subword_dfs(t, pool, &next, left - 1, cur, out, cap)?;
        cur.pop();
    }
    Ok(())
}

/// Full-support residue profiles over `alphabet` at modulus `d`, as canonical loop words.
pub fn profile_loops(alphabet: &Alphabet, d: usize, max_period: Option<usize>) -> Vec<Word> {
    let subsets = nonempty_subsets(alphabet.len());
    let mut out = Vec::new();
    let mut choice = vec![0usize; d];
    loop {
        let p = KappaProfile { d, sets: choice.iter().map(|&i| subsets[i].clone()).collect() };
        if max_period.is_none_or(|m| period_of_profile(&p) <= m) {
            out.push(p.canonical_word().expect("full support"));
        }
        let mut i = 0;
        while i < d {
            choice[i] += 1;
            if choice[i] < subsets.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == d {
            return out;
        }
    }
}

fn mod_candidates(alphabet: &Alphabet, d: usize, c: &Dfa, budget: usize, opts: &EnumOptions) -> Result<Vec<ExtLoopPattern>> {
    let t = Tracker::new(c);
    let loops = profile_loops(alphabet, d, opts.max_period);
    let mut out = Vec::new();
    for size in 0..=budget {
        let mut p = ExtLoopPattern { pattern: LoopPattern { connectors: vec![Vec::new()], loops: Vec::new() }, residues: Vec::new() };
        mod_dfs(&t, alphabet, d, &loops, &t.start(), size, &mut p, &mut out, opts)?;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn mod_dfs(
    t: &Tracker,
    alphabet: &Alphabet,
    d: usize,
    loops: &[Word],
    s: &BTreeSet<StateId>,
    left: usize,
    p: &mut ExtLoopPattern,
    out: &mut Vec<ExtLoopPattern>,
    opts: &EnumOptions,
) -> Result<()> {
    if !t.viable(s) {
        return Ok(());
    }
    if left == 0 {
        if t.accepting(s) && (!opts.boundary_filter || p.boundary_conditions_hold(d)) {
            if out.len() >= opts.cap {
                return Err(Error::StateCap { cap: opts.cap, during: "pattern enumeration" });
            }
            out.push(p.clone());
        }
        return Ok(());
    }
    for a in alphabet.letters() {
        p.pattern.connectors.last_mut().expect("non-empty").push(a);
        let next = t.word(s, &[a]);
        mod_dfs(t, alphabet, d, loops, &next, left - 1, p, out, opts)?;
        p.pattern.connectors.last_mut().expect("non-empty").pop();
    }
    for v in loops {
        let after_loop = t.star_word(s, v);
        if !t.viable(&after_loop) {
            continue;
        }
        for r in 0..d {
            let next = t.word(&after_loop, &v[..r]);
            p.pattern.loops.push(v.clone());
            p.pattern.connectors.push(Vec::new());
            p.residues.push(r);
            mod_dfs(t, alphabet, d, loops, &next, left - 1, p, out, opts)?;
            p.residues.pop();
            p.pattern.connectors.pop();
            p.pattern.loops.pop();
        }
    }
    Ok(())
}

/// One cycle word per edge set of cycles at each state, found among cycles of length up to `max_len`.
fn cycle_loops(a: &LabelingAutomaton, max_len: usize) -> Vec<Vec<Word>> {
    (0..a.num_states())
        .map(|q| {
            let mut by_edges: BTreeMap<BTreeSet<Letter>, Word> = BTreeMap::new();
            let mut stack: Vec<(StateId, Word)> = vec![(q, Vec::new())];
            while let Some((s, w)) = stack.pop() {
                if !w.is_empty() && s == q {
                    let edges: BTreeSet<Letter> = a.run_from(q, &w).edges.into_iter().collect();
                    by_edges.entry(edges).or_insert_with(|| w.clone());
                }
                if w.len() < max_len {
                    for x in a.alphabet().letters() {
                        let mut w2 = w.clone();
                        w2.push(x);
                        stack.push((a.next(s, x), w2));
                    }
                }
            }
            by_edges.into_values().collect()
        })
        .collect()
}

fn labeling_candidates(a: &LabelingAutomaton, c: &Dfa, budget: usize, opts: &EnumOptions) -> Result<Vec<LoopPattern>> {
    let t = Tracker::new(c);
    let loops = cycle_loops(a, budget.max(a.num_states()));
    let mut out = Vec::new();
    for size in 0..=budget {
        let mut p = LoopPattern { connectors: vec![Vec::new()], loops: Vec::new() };
        labeling_dfs(&t, a, &loops, a.initial(), &t.start(), size, &mut p, &mut out, opts.cap)?;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn labeling_dfs(
    t: &Tracker,
    a: &LabelingAutomaton,
    loops: &[Vec<Word>],
    q: StateId,
    s: &BTreeSet<StateId>,
    left: usize,
    p: &mut LoopPattern,
    out: &mut Vec<LoopPattern>,
    cap: usize,
) -> Result<()> {
    if !t.viable(s) {
        return Ok(());
    }
    if left == 0 {
        if t.accepting(s) {
            if out.len() >= cap {
                return Err(Error::StateCap { cap, during: "pattern enumeration" });
            }
            out.push(p.clone());
        }
        return Ok(());
    }
    for x in a.alphabet().letters() {
        p.connectors.last_mut().expect("non-empty").push(x);
        labeling_dfs(t, a, loops, a.next(q, x), &t.word(s, &[x]), left - 1, p, out, cap)?;
        p.connectors.last_mut().expect("non-empty").pop();
    }
    for v in &loops[q] {
        let next = t.star_word(s, v);
        p.loops.push(v.clone());
        p.connectors.push(Vec::new());
        labeling_dfs(t, a, loops, q, &next, left - 1, p, out, cap)?;
        p.connectors.pop();
        p.loops.pop();
    }
    Ok(())
}
