//! Regular expressions over single-character symbols.
//!
//! Grammar: `alt := cat ('|' cat)*`, `cat := rep*`, `rep := atom ('*' | '+' | '?')*`,
//! `atom := letter | '.' | 'ε' | '(' alt ')'`. Whitespace is ignored; `()` is the empty word.

use crate::alphabet::Alphabet;
use crate::automata::nfa::Nfa;
use crate::error::{Error, Result};

const SPECIAL: &[char] = &['|', '*', '+', '?', '(', ')', '.', 'ε'];

/// Parses `src` into an automaton. Without an explicit alphabet the letters occurring in `src` are used.
pub fn parse_regex(src: &str, alphabet: Option<&Alphabet>) -> Result<Nfa> {
    let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    let alphabet = match alphabet {
        Some(a) => a.clone(),
        None => {
            let letters: Vec<char> = chars.iter().copied().filter(|c| !SPECIAL.contains(c)).collect();
            Alphabet::new(letters).map_err(|_| Error::Parse("regex without letters needs an explicit alphabet".into()))?
        }
    };
    let mut p = Parser { chars, pos: 0, alphabet };
    let n = p.alt()?;
    if p.pos != p.chars.len() {
        return Err(Error::Parse(format!("unexpected {:?} at offset {} in regex", p.chars[p.pos], p.pos)));
    }
    Ok(n.trim())
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    alphabet: Alphabet,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn alt(&mut self) -> Result<Nfa> {
        let mut n = self.cat()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            let rhs = self.cat()?;
            n = n.union(&rhs)?;
        }
        Ok(n)
    }

    fn cat(&mut self) -> Result<Nfa> {
        let mut n = Nfa::from_word(self.alphabet.clone(), &[]);
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            let rhs = self.rep()?;
            n = n.concat(&rhs)?;
        }
        Ok(n)
    }

    fn rep(&mut self) -> Result<Nfa> {
        let mut n = self.atom()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => n = n.star(),
                '+' => n = n.concat(&n.star())?,
                '?' => n = n.union(&Nfa::from_word(self.alphabet.clone(), &[]))?,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(n)
    }

    fn atom(&mut self) -> Result<Nfa> {
        let c = self.peek().ok_or_else(|| Error::Parse("unexpected end of regex".into()))?;
        self.pos += 1;
        match c {
            '(' => {
                let n = self.alt()?;
                if self.peek() != Some(')') {
                    return Err(Error::Parse("unbalanced parenthesis in regex".into()));
                }
                self.pos += 1;
                Ok(n)
            }
            'ε' => Ok(Nfa::from_word(self.alphabet.clone(), &[])),
            '.' => {
                let mut n = Nfa::new(self.alphabet.clone());
                let s = n.add_state();
                let t = n.add_state();
                n.set_initial(s);
                n.set_final(t, true);
                for a in self.alphabet.letters() {
                    n.add_edge(s, Some(a), t);
                }
                Ok(n)
            }
            '*' | '+' | '?' | '|' | ')' => Err(Error::Parse(format!("unexpected {c:?} in regex"))),
            _ => {
                let a = self
                    .alphabet
                    .letter(c)
                    .ok_or_else(|| Error::AlphabetMismatch(format!("regex symbol {c:?} not in alphabet")))?;
                Ok(Nfa::from_word(self.alphabet.clone(), &[a]))
            }
        }
    }
}
