use std::fmt;

use crate::error::{Error, Result};

/// Letters are indices into an [`Alphabet`].
pub type Letter = usize;
/// Words are letter sequences.
pub type Word = Vec<Letter>;

/// A finite ordered set of symbols; letter `i` is `symbols[i]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    symbols: Vec<char>,
}

/// First code point used for generated symbols (edge ids, state names).
const GENERATED_BASE: u32 = 0xE000;

impl Alphabet {
    /// Builds an alphabet from distinct symbols; order is sorted.
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let mut symbols: Vec<char> = symbols.into_iter().collect();
        symbols.sort_unstable();
        symbols.dedup();
        if symbols.is_empty() {
            return Err(Error::InvalidAutomaton("alphabet must be non-empty".into()));
        }
        Ok(Self { symbols })
    }

    /// Alphabet from the distinct characters of `s`.
    pub fn from_chars(s: &str) -> Result<Self> {
        Self::new(s.chars())
    }

    /// An alphabet of `n` synthetic symbols, used for edge ids and state letters.
    pub fn generated(n: usize) -> Self {
        assert!(n > 0, "generated alphabet must be non-empty");
        let symbols = (0..n as u32)
            .map(|i| char::from_u32(GENERATED_BASE + i).expect("generated symbol in range"))
            .collect();
        Self { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn letters(&self) -> std::ops::Range<Letter> {
        0..self.symbols.len()
    }

    pub fn symbol(&self, a: Letter) -> char {
        self.symbols[a]
    }

    pub fn letter(&self, c: char) -> Option<Letter> {
        self.symbols.binary_search(&c).ok()
    }

    pub fn contains_alphabet(&self, other: &Alphabet) -> bool {
        other.symbols.iter().all(|c| self.letter(*c).is_some())
    }

    /// Smallest alphabet containing both.
    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        symbols.sort_unstable();
        symbols.dedup();
        Alphabet { symbols }
    }

    /// Parses a word written as a string of symbols; `ε` and the empty string denote the empty word.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        if s == "ε" || s == "eps" {
            return Ok(Vec::new());
        }
        s.chars()
            .map(|c| {
                self.letter(c)
                    .ok_or_else(|| Error::AlphabetMismatch(format!("symbol {c:?} not in alphabet {self}")))
            })
            .collect()
    }

    /// Renders a word; the empty word renders as `ε`.
    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        w.iter().map(|&a| self.display_symbol(a)).collect()
    }

    /// Renders a word without the `ε` convention.
    pub fn format_raw(&self, w: &[Letter]) -> String {
        w.iter().map(|&a| self.display_symbol(a)).collect()
    }

    fn display_symbol(&self, a: Letter) -> String {
        let c = self.symbols[a];
        let code = c as u32;
        if (GENERATED_BASE..GENERATED_BASE + 0x1000).contains(&code) {
            format!("<{}>", code - GENERATED_BASE)
        } else {
            c.to_string()
        }
    }

    /// Maps a word over `self` into `target`, which must contain every symbol used.
    pub fn translate(&self, w: &[Letter], target: &Alphabet) -> Result<Word> {
        w.iter()
            .map(|&a| {
                target
                    .letter(self.symbols[a])
                    .ok_or_else(|| Error::AlphabetMismatch(format!("symbol {:?} missing", self.symbols[a])))
            })
            .collect()
    }

    pub fn ensure_same(&self, other: &Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(format!("{self} vs {other}")))
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.letters().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.display_symbol(a))?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All words of length exactly `n`, in length-lexicographic order.
pub fn words_of_length(alphabet_size: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * alphabet_size);
        for w in &out {
            for a in 0..alphabet_size {
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// All words of length at most `n`, shortest first.
pub fn words_up_to(alphabet_size: usize, n: usize) -> Vec<Word> {
    (0..=n).flat_map(|k| words_of_length(alphabet_size, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols_are_sorted_and_deduplicated() {
        let a = Alphabet::from_chars("bab").unwrap();
        assert_eq!(a.symbols(), &['a', 'b']);
        assert!(Alphabet::from_chars("").is_err());
    }

    #[test]
    fn words_parse_and_render() {
        let a = Alphabet::from_chars("ab").unwrap();
        assert_eq!(a.parse_word("ba").unwrap(), vec![1, 0]);
        assert!(a.parse_word("ε").unwrap().is_empty());
        assert!(a.parse_word("abc").is_err());
        assert_eq!(a.format_word(&[]), "ε");
        assert_eq!(a.format_raw(&[]), "");
        let g = Alphabet::generated(3);
        assert_eq!(g.format_word(&[2, 0]), "<2><0>");
    }

    #[test]
    fn word_counts() {
        assert_eq!(words_of_length(2, 3).len(), 8);
        assert_eq!(words_up_to(2, 3).len(), 15);
        assert_eq!(words_up_to(3, 0), vec![Vec::<Letter>::new()]);
    }
}
