use std::collections::BTreeSet;
use std::fmt;

use crate::alphabet::{Alphabet, Letter, Word};

/// `κ_d(w)`: for each residue `i ∈ [1, d]`, the letters occurring at positions `p ≡ i mod d`
/// (positions are 1-based). `sets[i - 1]` holds residue `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KappaProfile {
    pub d: usize,
    pub sets: Vec<BTreeSet<Letter>>,
}

impl KappaProfile {
    pub fn empty(d: usize) -> Self {
        Self { d, sets: vec![BTreeSet::new(); d] }
    }

    /// Letters at residue `i ∈ [1, d]`; indices outside the range are taken modulo `d`.
    pub fn at(&self, i: usize) -> &BTreeSet<Letter> {
        &self.sets[(i + self.d - 1) % self.d]
    }

    pub fn is_subset_of(&self, other: &KappaProfile) -> bool {
        self.d == other.d && self.sets.iter().zip(&other.sets).all(|(a, b)| a.is_subset(b))
    }

    pub fn union(&self, other: &KappaProfile) -> KappaProfile {
        assert_eq!(self.d, other.d);
        let sets = self.sets.iter().zip(&other.sets).map(|(a, b)| a.union(b).copied().collect()).collect();
        KappaProfile { d: self.d, sets }
    }

    /// Every residue carries at least one letter, so some word of `(Σ^d)⁺` realizes the profile.
    pub fn is_full_support(&self) -> bool {
        self.sets.iter().all(|s| !s.is_empty())
    }

    /// A word of `(Σ^d)*` with exactly this profile: block `j` holds the `j`-th letter of each residue,
    /// repeating a residue's first letter once its letters run out. `None` if a residue is empty.
    pub fn canonical_word(&self) -> Option<Word> {
        if !self.is_full_support() {
            return None;
        }
        let blocks = self.sets.iter().map(BTreeSet::len).max().unwrap_or(0);
        let lists: Vec<Vec<Letter>> = self.sets.iter().map(|s| s.iter().copied().collect()).collect();
        let mut w = Vec::with_capacity(blocks * self.d);
        for j in 0..blocks {
            for l in &lists {
                w.push(*l.get(j).unwrap_or(&l[0]));
            }
        }
        Some(w)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        ProfileDisplay { p: self, alphabet }
    }
}

struct ProfileDisplay<'a> {
    p: &'a KappaProfile,
    alphabet: &'a Alphabet,
}

impl fmt::Display for ProfileDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.p.sets.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let letters: Vec<String> = s.iter().map(|&a| self.alphabet.format_raw(&[a])).collect();
            write!(f, "{}↦{{{}}}", i + 1, letters.join(","))?;
        }
        write!(f, "}}")
    }
}

pub fn kappa(d: usize, w: &[Letter]) -> KappaProfile {
    assert!(d >= 1, "d must be positive");
    let mut p = KappaProfile::empty(d);
    for (i, &a) in w.iter().enumerate() {
        p.sets[i % d].insert(a);
    }
    p
}

pub fn divisors(d: usize) -> Vec<usize> {
    (1..=d).filter(|t| d.is_multiple_of(*t)).collect()
}

/// `π_d(v)`: the least divisor `t` of `d` with `κ(i + t) = κ(i)` for all `i ∈ [1, d − t]`.
pub fn period(d: usize, v: &[Letter]) -> usize {
    period_of_profile(&kappa(d, v))
}

pub fn period_of_profile(p: &KappaProfile) -> usize {
    divisors(p.d)
        .into_iter()
        .find(|&t| (0..p.d - t).all(|i| p.sets[i + t] == p.sets[i]))
        .expect("t = d always qualifies")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `ρ(va) = av`.
    Right,
    /// `λ(av) = va`.
    Left,
}

pub fn rotate(w: &[Letter], direction: Direction, count: usize) -> Word {
    if w.is_empty() {
        return Vec::new();
    }
    let k = count % w.len();
    let mut v = w.to_vec();
    match direction {
        Direction::Right => v.rotate_right(k),
        Direction::Left => v.rotate_left(k),
    }
    v
}

/// Leftmost witness of `u ⊑_d v` as 1-based positions, or `None`.
pub fn d_embedding(d: usize, u: &[Letter], v: &[Letter]) -> Option<Vec<usize>> {
    if u.len() % d != v.len() % d {
        return None;
    }
    let mut map = Vec::with_capacity(u.len());
    let mut j = 0;
    for (i, &a) in u.iter().enumerate() {
        loop {
            if j >= v.len() {
                return None;
            }
            j += 1;
            if v[j - 1] == a && (j - 1) % d == i % d {
                map.push(j);
                break;
            }
        }
    }
    Some(map)
}

/// Membership in `↓_d v^{[r]}` by the characterization `|w| ≡ r mod d` and `κ_d(w) ⊆ κ_d(v)`;
/// valid for non-empty `v ∈ (Σ^d)*`.
pub fn in_loop_ideal(d: usize, v: &[Letter], r: usize, w: &[Letter]) -> bool {
    w.len() % d == r % d && kappa(d, w).is_subset_of(&kappa(d, v))
}
