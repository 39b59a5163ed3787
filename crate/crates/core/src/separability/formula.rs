use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Word};
use crate::automata::{Nfa, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::orders::{upward_closure_word, OrderSpec};

/// A boolean combination of upward closures of single words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PtlFormula {
    True,
    False,
    /// `↑w` under the order itself.
    Atom(Word),
    /// `↑w` under component `i` of a conjunction order.
    In(usize, Word),
    Not(Box<PtlFormula>),
    And(Vec<PtlFormula>),
    Or(Vec<PtlFormula>),
}

impl PtlFormula {
    pub fn negate(f: PtlFormula) -> Self {
        match f {
            PtlFormula::True => PtlFormula::False,
            PtlFormula::False => PtlFormula::True,
            PtlFormula::Not(g) => *g,
            g => PtlFormula::Not(Box::new(g)),
        }
    }

    pub fn and(mut parts: Vec<PtlFormula>) -> Self {
        parts.retain(|p| *p != PtlFormula::True);
        if parts.contains(&PtlFormula::False) {
            return PtlFormula::False;
        }
        match parts.len() {
            0 => PtlFormula::True,
            1 => parts.pop().expect("one part"),
            _ => PtlFormula::And(parts),
        }
    }

    pub fn or(mut parts: Vec<PtlFormula>) -> Self {
        parts.retain(|p| *p != PtlFormula::False);
        if parts.contains(&PtlFormula::True) {
            return PtlFormula::True;
        }
        match parts.len() {
            0 => PtlFormula::False,
            1 => parts.pop().expect("one part"),
            _ => PtlFormula::Or(parts),
        }
    }

    pub fn num_atoms(&self) -> usize {
        match self {
            PtlFormula::True | PtlFormula::False => 0,
            PtlFormula::Atom(_) | PtlFormula::In(..) => 1,
            PtlFormula::Not(f) => f.num_atoms(),
            PtlFormula::And(fs) | PtlFormula::Or(fs) => fs.iter().map(PtlFormula::num_atoms).sum(),
        }
    }

    /// Renders with `↑w` atoms, `↑[i]w` for components, and `!`, `&`, `|`.
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        FormulaDisplay { f: self, alphabet }
    }

    /// Parses the syntax produced by [`PtlFormula::display`]; `^` may stand for `↑`.
    pub fn parse(src: &str, alphabet: &Alphabet) -> Result<Self> {
        let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser { chars: &chars, pos: 0, alphabet };
        let f = p.or()?;
        if p.pos != chars.len() {
            return Err(p.error("trailing input"));
        }
        Ok(f)
    }
}

struct FormulaDisplay<'a> {
    f: &'a PtlFormula,
    alphabet: &'a Alphabet,
}

impl FormulaDisplay<'_> {
    fn write(&self, f: &PtlFormula, out: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
        match f {
            PtlFormula::True => write!(out, "true"),
            PtlFormula::False => write!(out, "false"),
            PtlFormula::Atom(w) => write!(out, "↑{}", self.alphabet.format_word(w)),
            PtlFormula::In(i, w) => write!(out, "↑[{i}]{}", self.alphabet.format_word(w)),
            PtlFormula::Not(g) => {
                write!(out, "!")?;
                self.write(g, out, true)
            }
            PtlFormula::And(fs) | PtlFormula::Or(fs) => {
                let sep = if matches!(f, PtlFormula::And(_)) { " & " } else { " | " };
                if nested {
                    write!(out, "(")?;
                }
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(out, "{sep}")?;
                    }
                    self.write(g, out, true)?;
                }
                if nested {
                    write!(out, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.f, out, false)
    }
}

struct Parser<'a> {
    chars: &'a [char],
    pos: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("formula: {msg} at offset {}", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn or(&mut self) -> Result<PtlFormula> {
        let mut parts = vec![self.and()?];
        while self.eat('|') {
            parts.push(self.and()?);
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { PtlFormula::Or(parts) })
    }

    fn and(&mut self) -> Result<PtlFormula> {
        let mut parts = vec![self.unary()?];
        while self.eat('&') {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { PtlFormula::And(parts) })
    }

    fn keyword(&mut self, k: &str) -> bool {
        let ks: Vec<char> = k.chars().collect();
        if self.chars[self.pos..].starts_with(&ks) {
            self.pos += ks.len();
            true
        } else {
            false
        }
    }

    fn unary(&mut self) -> Result<PtlFormula> {
        if self.eat('!') {
            return Ok(PtlFormula::Not(Box::new(self.unary()?)));
        }
        if self.eat('(') {
            let f = self.or()?;
            if !self.eat(')') {
                return Err(self.error("expected ')'"));
            }
            return Ok(f);
        }
        if self.keyword("true") {
            return Ok(PtlFormula::True);
        }
        if self.keyword("false") {
            return Ok(PtlFormula::False);
        }
        if !(self.eat('↑') || self.eat('^')) {
            return Err(self.error("expected an atom"));
        }
        let component = if self.eat('[') {
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let digits: String = self.chars[start..self.pos].iter().collect();
            if !self.eat(']') {
                return Err(self.error("expected ']'"));
            }
            Some(digits.parse::<usize>().map_err(|_| self.error("bad component index"))?)
        } else {
            None
        };
        let start = self.pos;
        while self.peek().is_some_and(|c| !matches!(c, '&' | '|' | ')' | '(' | '!')) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        let w = self.alphabet.parse_word(&text)?;
        Ok(match component {
            Some(i) => PtlFormula::In(i, w),
            None => PtlFormula::Atom(w),
        })
    }
}

/// The language of a formula under `o`.
pub fn formula_to_nfa(o: &OrderSpec, f: &PtlFormula) -> Result<Nfa> {
    let alphabet = o.alphabet().clone();
    Ok(match f {
        PtlFormula::True => Nfa::universal(alphabet),
        PtlFormula::False => Nfa::empty(alphabet),
        PtlFormula::Atom(w) => upward_closure_word(o, w)?,
        PtlFormula::In(i, w) => match o {
            OrderSpec::Conj(parts) if *i < parts.len() => upward_closure_word(&parts[*i], w)?,
            _ => return Err(Error::InvalidPattern(format!("component atom {i} needs a conjunction order"))),
        },
        PtlFormula::Not(g) => formula_to_nfa(o, g)?.complement(DEFAULT_STATE_CAP)?,
        PtlFormula::And(fs) => {
            let mut acc = Nfa::universal(alphabet);
            for g in fs {
                acc = acc.intersect(&formula_to_nfa(o, g)?)?.minimize(DEFAULT_STATE_CAP)?;
            }
            acc
        }
        PtlFormula::Or(fs) => {
            let mut acc = Nfa::empty(alphabet);
            for g in fs {
                acc = acc.union(&formula_to_nfa(o, g)?)?.minimize(DEFAULT_STATE_CAP)?;
            }
            acc
        }
    })
}

/// `K ⊆ S` and `L ∩ S = ∅` for the language `S` of `f`.
pub fn verify_separator(o: &OrderSpec, f: &PtlFormula, k: &Nfa, l: &Nfa) -> Result<bool> {
    k.alphabet().ensure_same(o.alphabet())?;
    l.alphabet().ensure_same(o.alphabet())?;
    let s = formula_to_nfa(o, f)?;
    Ok(k.is_subset_of(&s, DEFAULT_STATE_CAP)? && l.intersect(&s)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse_round_trip() {
        let a = Alphabet::from_chars("ab").unwrap();
        for src in ["true", "false", "↑ε", "!↑b", "↑ab & !↑ba", "(↑a & !↑b) | ↑bb", "↑[1]ab"] {
            let f = PtlFormula::parse(src, &a).unwrap();
            let shown = f.display(&a).to_string();
            assert_eq!(PtlFormula::parse(&shown, &a).unwrap(), f, "{src} -> {shown}");
        }
        assert_eq!(PtlFormula::parse("^ab", &a).unwrap(), PtlFormula::Atom(vec![0, 1]));
        assert!(PtlFormula::parse("↑c", &a).is_err());
        assert!(PtlFormula::parse("(↑a", &a).is_err());
    }

    #[test]
    fn connectives_flatten() {
        let x = PtlFormula::Atom(vec![0]);
        let f = PtlFormula::and(vec![PtlFormula::True, x.clone()]);
        assert_eq!(f, x);
        assert_eq!(PtlFormula::or(vec![]), PtlFormula::False);
        assert_eq!(PtlFormula::negate(PtlFormula::negate(x.clone())), x);
    }
}
