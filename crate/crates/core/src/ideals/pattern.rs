use std::collections::BTreeSet;
use std::fmt;

use crate::alphabet::{Alphabet, Letter, Word};
use crate::automata::{LabelingAutomaton, Nfa};
use crate::error::{Error, Result};
use crate::ideals::kappa::kappa;

/// One atom of a subword ideal: `{a, ε}` or `Γ*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Opt(Letter),
    Star(BTreeSet<Letter>),
}

/// `{a₀,ε}Γ₁*{a₁,ε}⋯` as an atom sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubwordIdeal {
    pub atoms: Vec<Atom>,
}

impl SubwordIdeal {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.iter().any(|a| matches!(a, Atom::Star(g) if g.is_empty())) {
            return Err(Error::InvalidPattern("star atoms need a non-empty letter set".into()));
        }
        Ok(Self { atoms })
    }

    pub fn num_stars(&self) -> usize {
        self.atoms.iter().filter(|a| matches!(a, Atom::Star(_))).count()
    }

    pub fn to_nfa(&self, alphabet: &Alphabet) -> Nfa {
        let mut n = Nfa::new(alphabet.clone());
        let states: Vec<_> = (0..=self.atoms.len()).map(|_| n.add_state()).collect();
        n.set_initial(states[0]);
        n.set_final(states[self.atoms.len()], true);
        for (i, atom) in self.atoms.iter().enumerate() {
            n.add_edge(states[i], None, states[i + 1]);
            match atom {
                Atom::Opt(a) => n.add_edge(states[i], Some(*a), states[i + 1]),
                Atom::Star(g) => g.iter().for_each(|&a| n.add_edge(states[i], Some(a), states[i])),
            }
        }
        n
    }

    /// `a₀ w₁^k a₁ ⋯` with `w_i` the letters of `Γ_i` in increasing order; these words form a chain
    /// that is cofinal in the ideal.
    pub fn chain_word(&self, k: usize) -> Word {
        let mut w = Vec::new();
        for atom in &self.atoms {
            match atom {
                Atom::Opt(a) => w.push(*a),
                Atom::Star(g) => {
                    for _ in 0..k {
                        w.extend(g.iter().copied());
                    }
                }
            }
        }
        w
    }

    /// Merges neighbouring stars comparable by inclusion and absorbs optional letters into neighbouring
    /// stars containing them. The language is unchanged.
    pub fn normalize(&self) -> SubwordIdeal {
        let mut atoms = self.atoms.clone();
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < atoms.len() {
                let merged = match (&atoms[i], &atoms[i + 1]) {
                    (Atom::Star(g), Atom::Star(h)) if h.is_subset(g) => Some(Atom::Star(g.clone())),
                    (Atom::Star(g), Atom::Star(h)) if g.is_subset(h) => Some(Atom::Star(h.clone())),
                    (Atom::Star(g), Atom::Opt(a)) | (Atom::Opt(a), Atom::Star(g)) if g.contains(a) => {
                        Some(Atom::Star(g.clone()))
                    }
                    _ => None,
                };
                if let Some(m) = merged {
                    atoms[i] = m;
                    atoms.remove(i + 1);
                    changed = true;
                } else {
                    i += 1;
                }
            }
            if !changed {
                return SubwordIdeal { atoms };
            }
        }
    }

    pub fn is_normal(&self) -> bool {
        self.normalize() == *self
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        SubwordDisplay { i: self, alphabet }
    }
}

struct SubwordDisplay<'a> {
    i: &'a SubwordIdeal,
    alphabet: &'a Alphabet,
}

impl fmt::Display for SubwordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.i.atoms.is_empty() {
            return write!(f, "ε");
        }
        let parts: Vec<String> = self
            .i
            .atoms
            .iter()
            .map(|a| match a {
                Atom::Opt(x) => self.alphabet.format_raw(&[*x]),
                Atom::Star(g) => {
                    let letters: Vec<Letter> = g.iter().copied().collect();
                    format!("({})*", self.alphabet.format_raw(&letters))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// `u₀ v₁* u₁ ⋯ v_n* u_n`, read as the ideal `↓` of this set under a labeling order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LoopPattern {
    pub connectors: Vec<Word>,
    pub loops: Vec<Word>,
}

impl LoopPattern {
    pub fn new(connectors: Vec<Word>, loops: Vec<Word>) -> Result<Self> {
        if connectors.len() != loops.len() + 1 {
            return Err(Error::InvalidPattern("a pattern with n loops has n + 1 connectors".into()));
        }
        if loops.iter().any(Vec::is_empty) {
            return Err(Error::InvalidPattern("loops must be non-empty".into()));
        }
        Ok(Self { connectors, loops })
    }

    /// A single word without loops.
    pub fn word(w: Word) -> Self {
        Self { connectors: vec![w], loops: Vec::new() }
    }

    pub fn num_loops(&self) -> usize {
        self.loops.len()
    }

    /// `u₀ v₁^k u₁ ⋯ v_n^k u_n`.
    pub fn chain_word(&self, k: usize) -> Word {
        let mut w = self.connectors[0].clone();
        for (v, u) in self.loops.iter().zip(&self.connectors[1..]) {
            for _ in 0..k {
                w.extend_from_slice(v);
            }
            w.extend_from_slice(u);
        }
        w
    }

    /// Automaton for the set `u₀ v₁* u₁ ⋯ v_n* u_n` itself (not its closure).
    pub fn generator_nfa(&self, alphabet: &Alphabet) -> Nfa {
        let mut n = Nfa::from_word(alphabet.clone(), &self.connectors[0]);
        for (v, u) in self.loops.iter().zip(&self.connectors[1..]) {
            let star = Nfa::from_word(alphabet.clone(), v).star();
            n = n.concat(&star).expect("same alphabet").concat(&Nfa::from_word(alphabet.clone(), u)).expect("same");
        }
        n
    }

    /// Checks that every loop returns to the state it starts from.
    pub fn validate_for_labeling(&self, a: &LabelingAutomaton) -> Result<()> {
        let mut q = a.run(&self.connectors[0]).sigma.1;
        for (i, (v, u)) in self.loops.iter().zip(&self.connectors[1..]).enumerate() {
            if a.run_from(q, v).sigma.1 != q {
                return Err(Error::InvalidPattern(format!("loop {} does not return to its state", i + 1)));
            }
            q = a.run_from(q, u).sigma.1;
        }
        Ok(())
    }

    /// For `M_d`: every loop length is a multiple of `d`.
    pub fn validate_for_mod(&self, d: usize) -> Result<()> {
        match self.loops.iter().position(|v| v.len() % d != 0) {
            Some(i) => Err(Error::InvalidPattern(format!("loop {} has length not divisible by {d}", i + 1))),
            None => Ok(()),
        }
    }

    /// The pattern without loop `i` (0-based); the neighbouring connectors merge.
    pub fn drop_loop(&self, i: usize) -> LoopPattern {
        let mut connectors = self.connectors.clone();
        let mut loops = self.loops.clone();
        loops.remove(i);
        let right = connectors.remove(i + 1);
        connectors[i].extend(right);
        LoopPattern { connectors, loops }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        PatternDisplay { p: self, residues: None, alphabet }
    }
}

/// `u₀ v₁^{[r₁]} u₁ ⋯` over `M_d`, denoting `↓_d u₀ v₁* w₁ u₁ ⋯` with `w_i` the length-`r_i` prefix of `v_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtLoopPattern {
    pub pattern: LoopPattern,
    pub residues: Vec<usize>,
}

impl ExtLoopPattern {
    pub fn new(pattern: LoopPattern, residues: Vec<usize>, d: usize) -> Result<Self> {
        if residues.len() != pattern.num_loops() {
            return Err(Error::InvalidPattern("one residue per loop".into()));
        }
        if residues.iter().any(|&r| r >= d) {
            return Err(Error::InvalidPattern(format!("residues must lie in [0, {}]", d - 1)));
        }
        pattern.validate_for_mod(d)?;
        Ok(Self { pattern, residues })
    }

    /// Residue-0 pattern with the same connectors and loops.
    pub fn from_plain(pattern: LoopPattern) -> Self {
        let residues = vec![0; pattern.num_loops()];
        Self { pattern, residues }
    }

    pub fn num_loops(&self) -> usize {
        self.pattern.num_loops()
    }

    pub fn connectors(&self) -> &[Word] {
        &self.pattern.connectors
    }

    pub fn loops(&self) -> &[Word] {
        &self.pattern.loops
    }

    /// `w_i`: the length-`r_i` prefix of `v_i` (0-based loop index).
    pub fn residue_prefix(&self, i: usize) -> Word {
        self.pattern.loops[i][..self.residues[i]].to_vec()
    }

    /// The plain pattern `u₀ (v₁) w₁u₁ (v₂) w₂u₂ ⋯` generating the same ideal.
    pub fn to_plain(&self) -> LoopPattern {
        let mut connectors = vec![self.pattern.connectors[0].clone()];
        for i in 0..self.num_loops() {
            let mut c = self.residue_prefix(i);
            c.extend_from_slice(&self.pattern.connectors[i + 1]);
            connectors.push(c);
        }
        LoopPattern { connectors, loops: self.pattern.loops.clone() }
    }

    /// `Σ|u_i| + Σ(d + r_i)`.
    pub fn length(&self, d: usize) -> usize {
        self.pattern.connectors.iter().map(Vec::len).sum::<usize>() + self.residues.iter().map(|r| d + r).sum::<usize>()
    }

    pub fn max_period(&self, d: usize) -> usize {
        self.pattern.loops.iter().map(|v| crate::ideals::kappa::period(d, v)).max().unwrap_or(1)
    }

    /// The boundary-letter conditions: a non-empty `u_i` (`i < n`) does not end with a letter of
    /// `κ_d(v_{i+1})(d)`, and a non-empty `u_i` (`i ≥ 1`) does not start with a letter of `κ_d(v_i)(r_i + 1)`.
    pub fn boundary_conditions_hold(&self, d: usize) -> bool {
        let n = self.num_loops();
        let u = &self.pattern.connectors;
        let v = &self.pattern.loops;
        for i in 0..n {
            if let Some(&last) = u[i].last() {
                if kappa(d, &v[i]).at(d).contains(&last) {
                    return false;
                }
            }
        }
        for i in 1..=n {
            if let Some(&first) = u[i].first() {
                if kappa(d, &v[i - 1]).at(self.residues[i - 1] + 1).contains(&first) {
                    return false;
                }
            }
        }
        true
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        PatternDisplay { p: &self.pattern, residues: Some(&self.residues), alphabet }
    }
}

struct PatternDisplay<'a> {
    p: &'a LoopPattern,
    residues: Option<&'a [usize]>,
    alphabet: &'a Alphabet,
}

impl fmt::Display for PatternDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.p.connectors[0].is_empty() {
            parts.push(self.alphabet.format_raw(&self.p.connectors[0]));
        }
        for i in 0..self.p.loops.len() {
            let mut s = format!("({})", self.alphabet.format_raw(&self.p.loops[i]));
            if let Some(r) = self.residues {
                s.push_str(&format!("[{}]", r[i]));
            }
            parts.push(s);
            if !self.p.connectors[i + 1].is_empty() {
                parts.push(self.alphabet.format_raw(&self.p.connectors[i + 1]));
            }
        }
        if parts.is_empty() {
            write!(f, "ε")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// A parsed pattern literal `u0 (v1)[r1] u1 ... un`; loops may carry a trailing `*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternLiteral {
    pub connectors: Vec<Word>,
    pub loops: Vec<Word>,
    pub residues: Vec<Option<usize>>,
}

impl PatternLiteral {
    pub fn parse(src: &str, alphabet: &Alphabet) -> Result<Self> {
        let chars: Vec<char> = src.chars().collect();
        let mut connectors = vec![Vec::new()];
        let mut loops = Vec::new();
        let mut residues = Vec::new();
        let mut i = 0;
        let letter = |c: char| {
            alphabet.letter(c).ok_or_else(|| Error::Parse(format!("pattern symbol {c:?} not in alphabet {alphabet}")))
        };
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() || c == 'ε' {
                i += 1;
            } else if c == '(' {
                let close = chars[i..]
                    .iter()
                    .position(|&x| x == ')')
                    .ok_or_else(|| Error::Parse("unbalanced parenthesis in pattern".into()))?
                    + i;
                let v = chars[i + 1..close].iter().filter(|c| !c.is_whitespace()).map(|&c| letter(c)).collect::<Result<Vec<_>>>()?;
                if v.is_empty() {
                    return Err(Error::Parse("empty loop in pattern".into()));
                }
                i = close + 1;
                if chars.get(i) == Some(&'*') {
                    i += 1;
                }
                let mut r = None;
                if chars.get(i) == Some(&'[') {
                    let end = chars[i..]
                        .iter()
                        .position(|&x| x == ']')
                        .ok_or_else(|| Error::Parse("unbalanced residue bracket".into()))?
                        + i;
                    let text: String = chars[i + 1..end].iter().collect();
                    r = Some(text.trim().parse().map_err(|_| Error::Parse(format!("bad residue {text:?}")))?);
                    i = end + 1;
                }
                loops.push(v);
                residues.push(r);
                connectors.push(Vec::new());
            } else {
                connectors.last_mut().expect("non-empty").push(letter(c)?);
                i += 1;
            }
        }
        Ok(Self { connectors, loops, residues })
    }

    pub fn has_residues(&self) -> bool {
        self.residues.iter().any(Option::is_some)
    }

    pub fn to_loop_pattern(&self) -> Result<LoopPattern> {
        LoopPattern::new(self.connectors.clone(), self.loops.clone())
    }

    pub fn to_ext(&self, d: usize) -> Result<ExtLoopPattern> {
        ExtLoopPattern::new(self.to_loop_pattern()?, self.residues.iter().map(|r| r.unwrap_or(0)).collect(), d)
    }

    /// Connector letters become optional letters and loops become stars over their letters.
    pub fn to_subword_ideal(&self) -> Result<SubwordIdeal> {
        let mut atoms: Vec<Atom> = self.connectors[0].iter().map(|&a| Atom::Opt(a)).collect();
        for (v, u) in self.loops.iter().zip(&self.connectors[1..]) {
            atoms.push(Atom::Star(v.iter().copied().collect()));
            atoms.extend(u.iter().map(|&a| Atom::Opt(a)));
        }
        SubwordIdeal::new(atoms)
    }
}
