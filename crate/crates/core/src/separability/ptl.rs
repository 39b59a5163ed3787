use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use crate::alphabet::words_up_to;
use crate::analysis::adherence_member;
use crate::automata::{Dfa, Nfa, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::ideals::{enumerate_ideals_with, EnumOptions, IdealRep};
use crate::orders::OrderSpec;

use super::formula::{formula_to_nfa, verify_separator, PtlFormula};

/// Outcome of a separability query. Separable and inseparable answers are re-verified before
/// they are returned; `Inconclusive` only says the budget ran out.
#[derive(Clone, Debug)]
pub enum SeparabilityVerdict {
    Separable { formula: PtlFormula, separator: Nfa },
    Inseparable { certificate: IdealRep },
    Inconclusive { budget: usize },
}

impl SeparabilityVerdict {
    pub fn is_separable(&self) -> bool {
        matches!(self, SeparabilityVerdict::Separable { .. })
    }

    pub fn is_inseparable(&self) -> bool {
        matches!(self, SeparabilityVerdict::Inseparable { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, SeparabilityVerdict::Inconclusive { .. })
    }

    pub fn report(&self, o: &OrderSpec) -> VerdictReport {
        match self {
            SeparabilityVerdict::Separable { formula, separator } => VerdictReport {
                verdict: "separable",
                formula: Some(formula.display(o.alphabet()).to_string()),
                formula_tree: Some(formula.clone()),
                separator_states: Some(separator.num_states()),
                certificate: None,
                budget: None,
            },
            SeparabilityVerdict::Inseparable { certificate } => VerdictReport {
                verdict: "inseparable",
                formula: None,
                formula_tree: None,
                separator_states: None,
                certificate: Some(certificate.display(o).to_string()),
                budget: None,
            },
            SeparabilityVerdict::Inconclusive { budget } => VerdictReport {
                verdict: "inconclusive",
                formula: None,
                formula_tree: None,
                separator_states: None,
                certificate: None,
                budget: Some(*budget),
            },
        }
    }
}

/// Serializable view of a verdict: formulas and ideals in their literal syntax.
#[derive(Clone, Debug, Serialize)]
pub struct VerdictReport {
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula_tree: Option<PtlFormula>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separator_states: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct SeparationOptions {
    /// Rounds run for `b = 0..=budget`; round `b` uses atoms of length `≤ b` and ideals of size `≤ b`.
    pub budget: usize,
    /// Run the two sides of each round on separate threads.
    pub parallel: bool,
    /// Passed to the ideal enumeration.
    pub enumeration: EnumOptions,
    /// Bound on product states while computing atom types.
    pub type_cap: usize,
}

impl SeparationOptions {
    pub fn with_budget(budget: usize) -> Self {
        Self { budget, ..Self::default() }
    }
}

impl Default for SeparationOptions {
    fn default() -> Self {
        Self { budget: 4, parallel: false, enumeration: EnumOptions::default(), type_cap: 200_000 }
    }
}

/// Decides whether some boolean combination of upward closures `↑_o w` separates `K` from `L`.
pub fn ptl_separate(o: &OrderSpec, k: &Nfa, l: &Nfa, budget: usize) -> Result<SeparabilityVerdict> {
    ptl_separate_with(o, k, l, &SeparationOptions::with_budget(budget))
}

pub fn ptl_separate_with(o: &OrderSpec, k: &Nfa, l: &Nfa, opts: &SeparationOptions) -> Result<SeparabilityVerdict> {
    check_inputs(o, k, l)?;
    search(o, k, l, opts, |b| plain_atoms(o, b))
}

/// Separation by boolean combinations of the component atoms `↑_{o_i} w` of a conjunction order.
///
/// Each such atom is upward closed for the conjunction, so it is a finite union of `↑_o v`; the
/// combinations are therefore PTLs of `o`, and an ideal adherent to both inputs rules them all out.
pub fn family_separate(o: &OrderSpec, k: &Nfa, l: &Nfa, budget: usize) -> Result<SeparabilityVerdict> {
    let OrderSpec::Conj(parts) = o else {
        return Err(Error::Unsupported("family atoms need a conjunction order".into()));
    };
    check_inputs(o, k, l)?;
    let sigma = o.alphabet().len();
    search(o, k, l, &SeparationOptions::with_budget(budget), |b| {
        (0..parts.len()).flat_map(|i| words_up_to(sigma, b).into_iter().map(move |w| PtlFormula::In(i, w))).collect()
    })
}

fn search(
    o: &OrderSpec,
    k: &Nfa,
    l: &Nfa,
    opts: &SeparationOptions,
    atoms_at: impl Fn(usize) -> Vec<PtlFormula> + Sync,
) -> Result<SeparabilityVerdict> {
    if let Some(w) = k.intersect(l)?.shortest_word() {
        return certify_inseparable(o, IdealRep::principal(o, &w)?, k, l);
    }
    for b in 0..=opts.budget {
        let atoms = atoms_at(b);
        let (sep, ins) = if opts.parallel {
            std::thread::scope(|s| {
                let h = s.spawn(|| separator_round(o, &atoms, k, l, opts.type_cap));
                let ins = ideal_round(o, b, k, l, &opts.enumeration);
                (h.join().expect("separator thread"), ins)
            })
        } else {
            let sep = separator_round(o, &atoms, k, l, opts.type_cap);
            let ins = if matches!(sep, Ok(Some(_))) { Ok(None) } else { ideal_round(o, b, k, l, &opts.enumeration) };
            (sep, ins)
        };
        if let Some(f) = sep? {
            return certify_separable(o, f, k, l);
        }
        if let Some(i) = ins? {
            return certify_inseparable(o, i, k, l);
        }
    }
    Ok(SeparabilityVerdict::Inconclusive { budget: opts.budget })
}

/// `L` is a PTL for `o` iff it is separable from its complement.
pub fn is_ptl(o: &OrderSpec, l: &Nfa, budget: usize) -> Result<SeparabilityVerdict> {
    let co = l.complement(DEFAULT_STATE_CAP)?;
    ptl_separate(o, l, &co, budget)
}

fn check_inputs(o: &OrderSpec, k: &Nfa, l: &Nfa) -> Result<()> {
    if matches!(o, OrderSpec::Morphism(_)) {
        return Err(Error::Unsupported("separability for morphism orders".into()));
    }
    k.alphabet().ensure_same(o.alphabet())?;
    l.alphabet().ensure_same(o.alphabet())
}

fn certify_separable(o: &OrderSpec, formula: PtlFormula, k: &Nfa, l: &Nfa) -> Result<SeparabilityVerdict> {
    if !verify_separator(o, &formula, k, l)? {
        return Err(Error::Certification(format!("formula {} does not separate", formula.display(o.alphabet()))));
    }
    let separator = formula_to_nfa(o, &formula)?;
    Ok(SeparabilityVerdict::Separable { formula, separator })
}

fn certify_inseparable(o: &OrderSpec, certificate: IdealRep, k: &Nfa, l: &Nfa) -> Result<SeparabilityVerdict> {
    if !(adherence_member(o, &certificate, k)? && adherence_member(o, &certificate, l)?) {
        return Err(Error::Certification(format!("ideal {} is not in both adherences", certificate.display(o))));
    }
    Ok(SeparabilityVerdict::Inseparable { certificate })
}

fn plain_atoms(o: &OrderSpec, b: usize) -> Vec<PtlFormula> {
    words_up_to(o.alphabet().len(), b).into_iter().map(PtlFormula::Atom).collect()
}

/// Budget exhaustion inside a round only means this round found nothing.
fn soften<T>(r: Result<Option<T>>) -> Result<Option<T>> {
    match r {
        Err(Error::StateCap { .. }) | Err(Error::Inconclusive(_)) => Ok(None),
        other => other,
    }
}

fn ideal_round(o: &OrderSpec, b: usize, k: &Nfa, l: &Nfa, opts: &EnumOptions) -> Result<Option<IdealRep>> {
    soften((|| {
        for i in enumerate_ideals_with(o, b, &[k, l], opts)? {
            if adherence_member(o, &i, k)? && adherence_member(o, &i, l)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    })())
}

type Bits = Vec<u64>;

fn bit(t: &Bits, i: usize) -> bool {
    t[i / 64] >> (i % 64) & 1 == 1
}

/// Types `{i : w ∈ A_i}` of the words `w` of `L(x)`.
fn types(x: &Nfa, atoms: &[Dfa], cap: usize) -> Result<HashSet<Bits>> {
    let dx = x.determinize(DEFAULT_STATE_CAP)?.minimize();
    let sigma = x.alphabet().len();
    let start: Vec<usize> = std::iter::once(dx.initial()).chain(atoms.iter().map(Dfa::initial)).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut out = HashSet::new();
    let blocks = atoms.len().div_ceil(64).max(1);
    while let Some(t) = queue.pop_front() {
        if dx.is_final(t[0]) {
            let mut bits = vec![0u64; blocks];
            for (i, a) in atoms.iter().enumerate() {
                if a.is_final(t[i + 1]) {
                    bits[i / 64] |= 1 << (i % 64);
                }
            }
            out.insert(bits);
        }
        for c in 0..sigma {
            let n: Vec<usize> = std::iter::once(dx.next(t[0], c)).chain(atoms.iter().zip(&t[1..]).map(|(a, &q)| a.next(q, c))).collect();
            if seen.insert(n.clone()) {
                if seen.len() > cap {
                    return Err(Error::StateCap { cap, during: "atom type computation" });
                }
                queue.push_back(n);
            }
        }
    }
    Ok(out)
}

fn atom_dfa(o: &OrderSpec, f: &PtlFormula) -> Result<Dfa> {
    Ok(formula_to_nfa(o, f)?.determinize(DEFAULT_STATE_CAP)?.minimize())
}

/// One round of the separator side: computes which atom combinations occur in `K` and in `L`;
/// if none is shared, the `K` combinations form a separator, which is then shrunk.
fn separator_round(o: &OrderSpec, atoms: &[PtlFormula], k: &Nfa, l: &Nfa, cap: usize) -> Result<Option<PtlFormula>> {
    soften((|| {
        let dfas: Vec<Dfa> = atoms.iter().map(|a| atom_dfa(o, a)).collect::<Result<_>>()?;
        let tk = types(k, &dfas, cap)?;
        let tl = types(l, &dfas, cap)?;
        if tk.iter().any(|t| tl.contains(t)) {
            return Ok(None);
        }
        Ok(Some(shrink(atoms, &tk, &tl)))
    })())
}

fn project(ts: &HashSet<Bits>, keep: &[usize]) -> HashSet<Vec<bool>> {
    ts.iter().map(|t| keep.iter().map(|&i| bit(t, i)).collect()).collect()
}

/// DNF over as few atoms as greedy removal allows, then each term with as few literals as possible.
fn shrink(atoms: &[PtlFormula], tk: &HashSet<Bits>, tl: &HashSet<Bits>) -> PtlFormula {
    let mut keep: Vec<usize> = (0..atoms.len()).collect();
    for i in (0..atoms.len()).rev() {
        let trial: Vec<usize> = keep.iter().copied().filter(|&j| j != i).collect();
        let pk = project(tk, &trial);
        if project(tl, &trial).is_disjoint(&pk) {
            keep = trial;
        }
    }
    let pk = project(tk, &keep);
    let pl = project(tl, &keep);
    let mut terms: BTreeSet<Vec<(usize, bool)>> = BTreeSet::new();
    let mut kts: Vec<&Vec<bool>> = pk.iter().collect();
    kts.sort();
    for t in kts {
        let mut lits: Vec<(usize, bool)> = t.iter().copied().enumerate().collect();
        let mut j = 0;
        while j < lits.len() {
            let trial: Vec<(usize, bool)> = lits.iter().enumerate().filter(|&(x, _)| x != j).map(|(_, &p)| p).collect();
            if pl.iter().any(|u| trial.iter().all(|&(x, v)| u[x] == v)) {
                j += 1;
            } else {
                lits = trial;
            }
        }
        terms.insert(lits);
    }
    let all: Vec<Vec<(usize, bool)>> = terms.iter().cloned().collect();
    let minimal: Vec<&Vec<(usize, bool)>> =
        all.iter().filter(|t| !all.iter().any(|s| s != *t && s.iter().all(|p| t.contains(p)))).collect();
    let lit = |&(x, v): &(usize, bool)| {
        let a = atoms[keep[x]].clone();
        if v { a } else { PtlFormula::negate(a) }
    };
    PtlFormula::or(minimal.into_iter().map(|t| PtlFormula::and(t.iter().map(lit).collect())).collect())
}
