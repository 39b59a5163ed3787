use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};

/// A finite monoid given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteMonoid {
    names: Vec<String>,
    table: Vec<usize>,
    identity: usize,
}

impl FiniteMonoid {
    /// `table[x * n + y] = x·y`; associativity and the identity laws are checked.
    pub fn new(names: Vec<String>, table: Vec<usize>, identity: usize) -> Result<Self> {
        let n = names.len();
        if n == 0 || identity >= n || table.len() != n * n || table.iter().any(|&z| z >= n) {
            return Err(Error::InvalidAutomaton("monoid table malformed".into()));
        }
        let m = Self { names, table, identity };
        for x in 0..n {
            if m.mul(identity, x) != x || m.mul(x, identity) != x {
                return Err(Error::InvalidAutomaton(format!("{} is not an identity", m.names[identity])));
            }
            for y in 0..n {
                for z in 0..n {
                    if m.mul(m.mul(x, y), z) != m.mul(x, m.mul(y, z)) {
                        return Err(Error::InvalidAutomaton("monoid table is not associative".into()));
                    }
                }
            }
        }
        Ok(m)
    }

    /// The cyclic group ℤ/nℤ.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        Self::new((0..n).map(|i| i.to_string()).collect(), table, 0).expect("cyclic group is a monoid")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.names.len() + y]
    }
}

/// A morphism `θ: Σ* → M` given by letter images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub monoid: FiniteMonoid,
    pub images: Vec<usize>,
    pub alphabet: Alphabet,
}

impl Morphism {
    pub fn new(monoid: FiniteMonoid, images: Vec<usize>, alphabet: Alphabet) -> Result<Self> {
        if images.len() != alphabet.len() || images.iter().any(|&x| x >= monoid.len()) {
            return Err(Error::InvalidAutomaton("morphism must map every letter into the monoid".into()));
        }
        Ok(Self { monoid, images, alphabet })
    }

    pub fn eval(&self, w: &[Letter]) -> usize {
        w.iter().fold(self.monoid.identity(), |x, &a| self.monoid.mul(x, self.images[a]))
    }
}

/// Decides `u ⪯_θ v`: `v = u₀v₁u₁⋯v_nu_n` with `u = u₀⋯u_n`, each inserted block `v_i` leaving the
/// image of the preceding prefix of `u` and of the following suffix of `u` unchanged.
///
/// For non-empty `u` this is a subsequence embedding where letter `i` of `u` may only match a letter of
/// `v` carrying the same prefix images before and after it and the same suffix images; the table
/// `reach[i][j]` records whether the first `i` letters embed into the first `j`. The empty word lies
/// below exactly the words of image 1.
pub fn morphism_leq(theta: &Morphism, u: &[Letter], v: &[Letter]) -> bool {
    let m = &theta.monoid;
    if u.is_empty() {
        return theta.eval(v) == m.identity();
    }
    let images = |w: &[Letter]| -> (Vec<usize>, Vec<usize>) {
        let mut left = vec![m.identity()];
        for &a in w {
            left.push(m.mul(*left.last().expect("non-empty"), theta.images[a]));
        }
        let mut right = vec![m.identity(); w.len() + 1];
        for i in (0..w.len()).rev() {
            right[i] = m.mul(theta.images[w[i]], right[i + 1]);
        }
        (left, right)
    };
    let (lu, ru) = images(u);
    let (lv, rv) = images(v);
    let key = |l: &[usize], r: &[usize], w: &[Letter], i: usize| (l[i], r[i], w[i], l[i + 1], r[i + 1]);
    let (n, k) = (u.len(), v.len());
    let mut reach = vec![vec![false; k + 1]; n + 1];
    reach[0].iter_mut().for_each(|x| *x = true);
    for i in 1..=n {
        let want = key(&lu, &ru, u, i - 1);
        for j in 1..=k {
            reach[i][j] = reach[i][j - 1] || (reach[i - 1][j - 1] && key(&lv, &rv, v, j - 1) == want);
        }
    }
    reach[n][k]
}

/// JSON description of a morphism into a finite monoid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorphismFile {
    pub alphabet: Vec<String>,
    pub elements: Vec<String>,
    pub identity: String,
    /// `table[x][y]` is the product `x·y`.
    pub table: Vec<Vec<String>>,
    pub theta: std::collections::BTreeMap<String, String>,
}

impl MorphismFile {
    pub fn parse(s: &str) -> Result<Morphism> {
        let f: MorphismFile = serde_json::from_str(s).map_err(|e| Error::Parse(format!("morphism JSON: {e}")))?;
        let idx = |x: &str| -> Result<usize> {
            f.elements.iter().position(|e| e == x).ok_or_else(|| Error::Parse(format!("unknown element {x:?}")))
        };
        let mut table = Vec::new();
        for row in &f.table {
            for x in row {
                table.push(idx(x)?);
            }
        }
        let monoid = FiniteMonoid::new(f.elements.clone(), table, idx(&f.identity)?)?;
        let chars: Vec<char> = f.alphabet.iter().filter_map(|s| s.chars().next()).collect();
        let alphabet = Alphabet::new(chars)?;
        let images = alphabet
            .symbols()
            .iter()
            .map(|c| {
                let img = f.theta.get(&c.to_string()).ok_or_else(|| Error::Parse(format!("θ undefined on {c:?}")))?;
                idx(img)
            })
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(monoid, images, alphabet)
    }
}
