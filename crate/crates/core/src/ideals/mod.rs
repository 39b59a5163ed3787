//! Ideal representations, the loop-pattern calculus and the residue-profile machinery.

pub mod decompose;
pub mod enumerate;
pub mod kappa;
pub mod pattern;
pub mod pump;

use std::fmt;

pub use decompose::{ideal_decompose, sample_downward_closed};
pub use enumerate::{enumerate_ideals, enumerate_ideals_with, profile_loops, EnumOptions};
pub use kappa::{d_embedding, divisors, in_loop_ideal, kappa, period, rotate, Direction, KappaProfile};
pub use pattern::{Atom, ExtLoopPattern, LoopPattern, PatternLiteral, SubwordIdeal};
pub use pump::{pump_pattern, pump_word_up, PumpStrategy, PumpedWord};

use crate::alphabet::{Letter, Word};
use crate::analysis::{adherence_member, downward_closure};
use crate::automata::{Nfa, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::orders::OrderSpec;

/// An ideal of some order, in the representation that order uses.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdealRep {
    /// Subword ideals as atom sequences.
    Subword(SubwordIdeal),
    /// `↓ u₀v₁*u₁⋯` for a labeling order.
    Loop(LoopPattern),
    /// `↓_d u₀v₁^{[r₁]}u₁⋯` for `M_d`.
    Ext(ExtLoopPattern),
    /// `f⁻¹(J)` for an ideal `J` of the inner order.
    Via(Box<IdealRep>),
    /// `⋂ I_s`, one component per conjunct.
    Conj(Vec<IdealRep>),
}

impl IdealRep {
    /// The finite ideal `↓w` in the representation native to `o`.
    pub fn principal(o: &OrderSpec, w: &[Letter]) -> Result<IdealRep> {
        Ok(match o {
            OrderSpec::Subword(_) => IdealRep::Subword(SubwordIdeal { atoms: w.iter().map(|&a| Atom::Opt(a)).collect() }),
            OrderSpec::Labeling(_) | OrderSpec::Mod { .. } => IdealRep::Loop(LoopPattern::word(w.to_vec())),
            OrderSpec::Via { f, inner } => IdealRep::Via(Box::new(IdealRep::principal(inner, &f.apply_word(w))?)),
            OrderSpec::Conj(parts) => {
                IdealRep::Conj(parts.iter().map(|p| IdealRep::principal(p, w)).collect::<Result<_>>()?)
            }
            OrderSpec::Counting(_) => {
                let enc = o.conjunction_encoding().expect("counting order");
                IdealRep::principal(&enc, w)?
            }
            OrderSpec::Morphism(_) => return Err(Error::Unsupported("ideals of morphism orders".into())),
        })
    }

    /// Renders the ideal in the literal syntax accepted by [`parse_ideal`].
    pub fn display<'a>(&'a self, o: &'a OrderSpec) -> impl fmt::Display + 'a {
        IdealDisplay { i: self, o }
    }

    /// Checks that the representation fits `o` and satisfies its side conditions.
    pub fn validate(&self, o: &OrderSpec) -> Result<()> {
        match (o, self) {
            (OrderSpec::Subword(_), IdealRep::Subword(_)) => Ok(()),
            (OrderSpec::Subword(_), IdealRep::Loop(_)) => Ok(()),
            (OrderSpec::Labeling(a), IdealRep::Loop(p)) => p.validate_for_labeling(a),
            (OrderSpec::Mod { d, .. }, IdealRep::Loop(p)) => p.validate_for_mod(*d),
            (OrderSpec::Mod { d, .. }, IdealRep::Ext(e)) => {
                ExtLoopPattern::new(e.pattern.clone(), e.residues.clone(), *d).map(|_| ())
            }
            (OrderSpec::Via { f, inner }, IdealRep::Via(j)) => {
                j.validate(inner)?;
                // ↓f(f⁻¹(J)) = J
                let jn = ideal_to_nfa(inner, j)?;
                let back = downward_closure(inner, &f.apply(&f.inverse_apply(&jn)?)?)?;
                if back.equivalent(&jn, DEFAULT_STATE_CAP)? {
                    Ok(())
                } else {
                    Err(Error::InvalidPattern("inner ideal is not saturated by the transducer".into()))
                }
            }
            (OrderSpec::Conj(parts), IdealRep::Conj(js)) if parts.len() == js.len() => {
                for (p, j) in parts.iter().zip(js) {
                    j.validate(p)?;
                }
                // the tuple must lie in the joint adherence of the intersection
                let meet = ideal_to_nfa(o, self)?;
                if adherence_member(o, self, &meet)? {
                    Ok(())
                } else {
                    Err(Error::InvalidPattern("component ideals are not jointly adherent to their intersection".into()))
                }
            }
            (OrderSpec::Counting(_), _) => self.validate(&o.conjunction_encoding().expect("counting order")),
            _ => Err(Error::InvalidPattern(format!("representation does not fit order {o}"))),
        }
    }
}

/// The subword ideal read off a loop pattern: connector letters optional, loops as stars of their letters.
pub fn loop_to_subword(p: &LoopPattern) -> SubwordIdeal {
    let mut atoms: Vec<Atom> = p.connectors[0].iter().map(|&a| Atom::Opt(a)).collect();
    for (v, u) in p.loops.iter().zip(&p.connectors[1..]) {
        atoms.push(Atom::Star(v.iter().copied().collect()));
        atoms.extend(u.iter().map(|&a| Atom::Opt(a)));
    }
    SubwordIdeal { atoms }
}

/// Automaton for the language of an ideal.
pub fn ideal_to_nfa(o: &OrderSpec, i: &IdealRep) -> Result<Nfa> {
    match (o, i) {
        (OrderSpec::Subword(a), IdealRep::Subword(s)) => Ok(s.to_nfa(a)),
        (OrderSpec::Subword(a), IdealRep::Loop(p)) => Ok(loop_to_subword(p).to_nfa(a)),
        (OrderSpec::Labeling(a), IdealRep::Loop(p)) => {
            p.validate_for_labeling(a)?;
            downward_closure(o, &p.generator_nfa(o.alphabet()))
        }
        (OrderSpec::Mod { d, .. }, IdealRep::Loop(p)) => {
            p.validate_for_mod(*d)?;
            downward_closure(o, &p.generator_nfa(o.alphabet()))
        }
        (OrderSpec::Mod { .. }, IdealRep::Ext(e)) => downward_closure(o, &e.to_plain().generator_nfa(o.alphabet())),
        (OrderSpec::Via { f, inner }, IdealRep::Via(j)) => f.inverse_apply(&ideal_to_nfa(inner, j)?),
        (OrderSpec::Conj(parts), IdealRep::Conj(js)) if parts.len() == js.len() => {
            let mut acc = ideal_to_nfa(&parts[0], &js[0])?;
            for (p, j) in parts.iter().zip(js).skip(1) {
                acc = acc.intersect(&ideal_to_nfa(p, j)?)?.trim();
            }
            Ok(acc)
        }
        (OrderSpec::Counting(_), _) => ideal_to_nfa(&o.conjunction_encoding().expect("counting order"), i),
        _ => Err(Error::InvalidPattern(format!("representation does not fit order {o}"))),
    }
}

/// The loop word and residue of a connector-free single-loop `M_d` pattern.
fn single_loop(i: &IdealRep) -> Option<(&[Letter], usize)> {
    let (p, r) = match i {
        IdealRep::Loop(p) => (p, 0),
        IdealRep::Ext(e) => (&e.pattern, e.residues.first().copied().unwrap_or(0)),
        _ => return None,
    };
    (p.num_loops() == 1 && p.connectors.iter().all(Vec::is_empty)).then(|| (p.loops[0].as_slice(), r))
}

/// Language inclusion `I ⊆ J`; single-loop `M_d` patterns compare residue profiles directly.
pub fn ideal_includes(o: &OrderSpec, i: &IdealRep, j: &IdealRep) -> Result<bool> {
    if let OrderSpec::Mod { d, .. } = o {
        if let (Some((v, r)), Some((w, s))) = (single_loop(i), single_loop(j)) {
            if v.len() % d == 0 && w.len() % d == 0 {
                return Ok(r == s && kappa(*d, v).is_subset_of(&kappa(*d, w)));
            }
        }
    }
    ideal_to_nfa(o, i)?.is_subset_of(&ideal_to_nfa(o, j)?, DEFAULT_STATE_CAP)
}

pub fn ideal_equal(o: &OrderSpec, i: &IdealRep, j: &IdealRep) -> Result<bool> {
    Ok(ideal_includes(o, i, j)? && ideal_includes(o, j, i)?)
}

/// The extended pattern with loop `i` (0-based) replaced by its residue prefix `w_i`.
pub fn drop_ext_loop(p: &ExtLoopPattern, i: usize) -> ExtLoopPattern {
    let mut connectors = p.pattern.connectors.clone();
    let mut loops = p.pattern.loops.clone();
    let mut residues = p.residues.clone();
    let mut merged = connectors[i].clone();
    merged.extend(p.residue_prefix(i));
    merged.extend(connectors.remove(i + 1));
    connectors[i] = merged;
    loops.remove(i);
    residues.remove(i);
    ExtLoopPattern { pattern: LoopPattern { connectors, loops }, residues }
}

/// Every loop matters: dropping any single loop yields a strictly smaller ideal.
pub fn loop_pattern_irreducible(o: &OrderSpec, p: &LoopPattern) -> Result<bool> {
    let whole = IdealRep::Loop(p.clone());
    for i in 0..p.num_loops() {
        if ideal_includes(o, &whole, &IdealRep::Loop(p.drop_loop(i)))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Loop irreducibility for extended patterns, without the boundary-letter conditions.
pub fn ext_loops_irreducible_in(o: &OrderSpec, p: &ExtLoopPattern) -> Result<bool> {
    let whole = IdealRep::Ext(p.clone());
    for i in 0..p.num_loops() {
        if ideal_includes(o, &whole, &IdealRep::Ext(drop_ext_loop(p, i)))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Irreducibility of a plain pattern (`Loop`) or an extended one (`Ext`, which adds the boundary-letter conditions).
pub fn pattern_irreducible(o: &OrderSpec, p: &IdealRep) -> Result<bool> {
    match (o, p) {
        (OrderSpec::Labeling(_) | OrderSpec::Mod { .. }, IdealRep::Loop(q)) => {
            p.validate(o)?;
            loop_pattern_irreducible(o, q)
        }
        (OrderSpec::Mod { d, .. }, IdealRep::Ext(e)) => {
            p.validate(o)?;
            Ok(e.boundary_conditions_hold(*d) && ext_loops_irreducible_in(o, e)?)
        }
        _ => Err(Error::InvalidPattern("irreducibility is defined for loop patterns of labeling orders".into())),
    }
}

/// Rewrites `p` into an irreducible extended pattern with the same ideal: drop loops that do not
/// matter, absorb a connector's first letter into the preceding residue, and move a connector's
/// last letter into the following loop by rotation. Each rewrite is kept only if the ideal is
/// unchanged, and each strictly shrinks the connectors or the loop count, so the process stops.
pub fn make_extended_irreducible(o: &OrderSpec, p: &ExtLoopPattern, m: usize) -> Result<ExtLoopPattern> {
    let OrderSpec::Mod { d, .. } = o else {
        return Err(Error::InvalidPattern("extended patterns live over M_d".into()));
    };
    let d = *d;
    IdealRep::Ext(p.clone()).validate(o)?;
    if let Some(v) = p.loops().iter().find(|v| period(d, v) > m) {
        return Err(Error::Precondition(format!("loop of period {} exceeds the bound {m}", period(d, v))));
    }
    let original = IdealRep::Ext(p.clone());
    let same = |q: &ExtLoopPattern| ideal_equal(o, &original, &IdealRep::Ext(q.clone()));
    let mut cur = p.clone();
    'outer: loop {
        for i in 0..cur.num_loops() {
            let q = drop_ext_loop(&cur, i);
            if same(&q)? {
                cur = q;
                continue 'outer;
            }
        }
        let n = cur.num_loops();
        for i in 1..=n {
            let u = &cur.pattern.connectors[i];
            if let Some(&first) = u.first() {
                if kappa(d, &cur.pattern.loops[i - 1]).at(cur.residues[i - 1] + 1).contains(&first) {
                    let mut q = cur.clone();
                    q.pattern.connectors[i].remove(0);
                    q.residues[i - 1] = (q.residues[i - 1] + 1) % d;
                    if same(&q)? {
                        cur = q;
                        continue 'outer;
                    }
                }
            }
        }
        for i in 0..n {
            let u = &cur.pattern.connectors[i];
            if let Some(&last) = u.last() {
                if kappa(d, &cur.pattern.loops[i]).at(d).contains(&last) {
                    let mut q = cur.clone();
                    q.pattern.connectors[i].pop();
                    q.pattern.loops[i] = rotate(&cur.pattern.loops[i], Direction::Right, 1);
                    q.residues[i] = (q.residues[i] + 1) % d;
                    if same(&q)? {
                        cur = q;
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    if !pattern_irreducible(o, &IdealRep::Ext(cur.clone()))? {
        return Err(Error::Certification("rewriting stopped at a reducible pattern".into()));
    }
    Ok(cur)
}

/// Parses an ideal literal for `o`: pattern literals for subword and labeling orders (residues make
/// an extended `M_d` pattern), `via{..}` and `conj{.. | ..}` for the combinators.
pub fn parse_ideal(o: &OrderSpec, src: &str) -> Result<IdealRep> {
    let s = src.trim();
    let rep = match o {
        OrderSpec::Subword(a) => IdealRep::Subword(PatternLiteral::parse(s, a)?.to_subword_ideal()?),
        OrderSpec::Labeling(a) => IdealRep::Loop(PatternLiteral::parse(s, a.alphabet())?.to_loop_pattern()?),
        OrderSpec::Mod { d, automaton } => {
            let lit = PatternLiteral::parse(s, automaton.alphabet())?;
            if lit.has_residues() {
                IdealRep::Ext(lit.to_ext(*d)?)
            } else {
                IdealRep::Loop(lit.to_loop_pattern()?)
            }
        }
        OrderSpec::Via { inner, .. } => {
            let body = strip_wrapper(s, "via").unwrap_or(s);
            IdealRep::Via(Box::new(parse_ideal(inner, body)?))
        }
        OrderSpec::Conj(parts) => {
            let body = strip_wrapper(s, "conj")
                .ok_or_else(|| Error::Parse("conjunction ideals are written conj{I1 | I2 | ...}".into()))?;
            let items = split_bars(body);
            if items.len() != parts.len() {
                return Err(Error::Parse(format!("expected {} components, found {}", parts.len(), items.len())));
            }
            IdealRep::Conj(parts.iter().zip(items).map(|(p, t)| parse_ideal(p, t)).collect::<Result<_>>()?)
        }
        OrderSpec::Counting(_) => return parse_ideal(&o.conjunction_encoding().expect("counting order"), s),
        OrderSpec::Morphism(_) => return Err(Error::Unsupported("ideals of morphism orders".into())),
    };
    rep.validate(o)?;
    Ok(rep)
}

fn strip_wrapper<'a>(s: &'a str, head: &str) -> Option<&'a str> {
    let rest = s.strip_prefix(head)?.trim_start();
    rest.strip_prefix('{')?.strip_suffix('}')
}

fn split_bars(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            '|' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

struct IdealDisplay<'a> {
    i: &'a IdealRep,
    o: &'a OrderSpec,
}

impl fmt::Display for IdealDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.o.alphabet();
        match (self.i, self.o) {
            (IdealRep::Subword(s), _) => write!(f, "{}", s.display(a)),
            (IdealRep::Loop(p), OrderSpec::Subword(_)) => write!(f, "{}", loop_to_subword(p).display(a)),
            (IdealRep::Loop(p), _) => write!(f, "{}", p.display(a)),
            (IdealRep::Ext(e), _) => write!(f, "{}", e.display(a)),
            (IdealRep::Via(j), OrderSpec::Via { inner, .. }) => write!(f, "via{{{}}}", j.display(inner)),
            (IdealRep::Conj(js), OrderSpec::Conj(parts)) => {
                write!(f, "conj{{")?;
                for (k, (j, p)) in js.iter().zip(parts).enumerate() {
                    if k > 0 {
                        write!(f, " | ")?;
                    }
                    write!(f, "{}", j.display(p))?;
                }
                write!(f, "}}")
            }
            (_, OrderSpec::Counting(_)) => {
                let enc = self.o.conjunction_encoding().expect("counting order");
                write!(f, "{}", IdealDisplay { i: self.i, o: &enc })
            }
            _ => write!(f, "<ideal>"),
        }
    }
}

/// `u₀ v₁^k u₁ ⋯`-style chain words, cofinal in the ideal; `None` for combinator ideals.
pub fn chain_word(i: &IdealRep, k: usize) -> Option<Word> {
    match i {
        IdealRep::Subword(s) => Some(s.chain_word(k)),
        IdealRep::Loop(p) => Some(p.chain_word(k)),
        IdealRep::Ext(e) => Some(e.to_plain().chain_word(k)),
        _ => None,
    }
}
