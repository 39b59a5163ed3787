//! Serialization of automata: a structured JSON format, a line-oriented text format and DOT.
//!
//! JSON fields: `states`, `alphabet` (one-character strings), `edges` (`from`, `label` with `""` for ε,
//! `to`, optional `inc` and `output`), `initial`, `final`, and the optional `counters`, `final_inc`,
//! `output_alphabet` and `final_output` used by counter automata, counting automata and transducers.
//!
//! Line format, one directive or edge per line, `#` starts a comment:
//! ```text
//! alphabet: a b
//! counters: c
//! initial: p
//! final: q
//! p a q c=1
//! q - p
//! ```
//! An edge label `-` or `ε` is the empty word; trailing `name=value` items are increments.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Letter};
use crate::automata::counter::{CounterAutomaton, CountingAutomaton};
use crate::automata::labeling::LabelingAutomaton;
use crate::automata::nfa::Nfa;
use crate::automata::transducer::SequentialTransducer;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub from: String,
    pub label: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inc: BTreeMap<String, u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonFile {
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    pub edges: Vec<EdgeRecord>,
    pub initial: Vec<String>,
    #[serde(rename = "final")]
    pub finals: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub counters: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub final_inc: BTreeMap<String, BTreeMap<String, u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_alphabet: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub final_output: BTreeMap<String, String>,
}

fn parse_alphabet(symbols: &[String]) -> Result<Alphabet> {
    let mut chars = Vec::with_capacity(symbols.len());
    for s in symbols {
        let mut it = s.chars();
        match (it.next(), it.next()) {
            (Some(c), None) => chars.push(c),
            _ => return Err(Error::Parse(format!("alphabet symbols must be single characters, got {s:?}"))),
        }
    }
    Alphabet::new(chars)
}

fn alphabet_strings(a: &Alphabet) -> Vec<String> {
    a.symbols().iter().map(|c| c.to_string()).collect()
}

fn unique_names(names: impl Iterator<Item = String>) -> Vec<String> {
    let names: Vec<String> = names.collect();
    let distinct: HashSet<&String> = names.iter().collect();
    if distinct.len() == names.len() {
        names
    } else {
        (0..names.len()).map(|i| format!("q{i}")).collect()
    }
}

impl AutomatonFile {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("automaton JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Parses JSON when the text starts with `{`, the line format otherwise.
    pub fn parse(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('{') {
            Self::from_json(s)
        } else {
            Self::from_lines(s)
        }
    }

    pub fn from_lines(s: &str) -> Result<Self> {
        let mut file = AutomatonFile {
            states: Vec::new(),
            alphabet: Vec::new(),
            edges: Vec::new(),
            initial: Vec::new(),
            finals: Vec::new(),
            counters: Vec::new(),
            final_inc: BTreeMap::new(),
            output_alphabet: None,
            final_output: BTreeMap::new(),
        };
        let mut seen: HashSet<String> = HashSet::new();
        let mut note = |file: &mut AutomatonFile, q: &str| {
            if seen.insert(q.to_string()) {
                file.states.push(q.to_string());
            }
        };
        for (lineno, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some((key, rest)) = line.split_once(':') {
                let items: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                match key.trim() {
                    "alphabet" => file.alphabet = items,
                    "counters" => file.counters = items,
                    "initial" => {
                        for q in &items {
                            note(&mut file, q);
                        }
                        file.initial = items;
                    }
                    "final" => {
                        for q in &items {
                            note(&mut file, q);
                        }
                        file.finals = items;
                    }
                    "states" => {
                        for q in &items {
                            note(&mut file, q);
                        }
                    }
                    other => return Err(Error::Parse(format!("line {}: unknown directive {other:?}", lineno + 1))),
                }
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() < 3 {
                return Err(Error::Parse(format!("line {}: expected `from label to`", lineno + 1)));
            }
            let label = if parts[1] == "-" || parts[1] == "ε" { String::new() } else { parts[1].to_string() };
            let mut inc = BTreeMap::new();
            for item in &parts[3..] {
                let (c, v) = item
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("line {}: bad increment {item:?}", lineno + 1)))?;
                let v: u32 = v.parse().map_err(|_| Error::Parse(format!("line {}: bad increment {item:?}", lineno + 1)))?;
                inc.insert(c.to_string(), v);
            }
            note(&mut file, parts[0]);
            note(&mut file, parts[2]);
            file.edges.push(EdgeRecord { from: parts[0].into(), label, to: parts[2].into(), inc, output: None });
        }
        Ok(file)
    }

    pub fn to_lines(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "alphabet: {}", self.alphabet.join(" "));
        if !self.counters.is_empty() {
            let _ = writeln!(s, "counters: {}", self.counters.join(" "));
        }
        let _ = writeln!(s, "states: {}", self.states.join(" "));
        let _ = writeln!(s, "initial: {}", self.initial.join(" "));
        let _ = writeln!(s, "final: {}", self.finals.join(" "));
        for e in &self.edges {
            let label = if e.label.is_empty() { "-" } else { &e.label };
            let _ = write!(s, "{} {} {}", e.from, label, e.to);
            for (c, v) in &e.inc {
                let _ = write!(s, " {c}={v}");
            }
            s.push('\n');
        }
        s
    }

    fn state_index(&self) -> Result<HashMap<&str, usize>> {
        let mut idx = HashMap::new();
        for (i, q) in self.states.iter().enumerate() {
            if idx.insert(q.as_str(), i).is_some() {
                return Err(Error::Parse(format!("duplicate state {q:?}")));
            }
        }
        Ok(idx)
    }

    fn lookup(idx: &HashMap<&str, usize>, q: &str) -> Result<usize> {
        idx.get(q).copied().ok_or_else(|| Error::Parse(format!("unknown state {q:?}")))
    }

    fn letter(alphabet: &Alphabet, label: &str) -> Result<Option<Letter>> {
        if label.is_empty() {
            return Ok(None);
        }
        let mut it = label.chars();
        match (it.next(), it.next()) {
            (Some(c), None) => alphabet
                .letter(c)
                .map(Some)
                .ok_or_else(|| Error::Parse(format!("label {label:?} not in alphabet"))),
            _ => Err(Error::Parse(format!("labels must be single characters, got {label:?}"))),
        }
    }

    pub fn to_counter_automaton(&self) -> Result<CounterAutomaton> {
        let alphabet = parse_alphabet(&self.alphabet)?;
        let idx = self.state_index()?;
        let cidx: HashMap<&str, usize> = self.counters.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
        let mut ca = CounterAutomaton::new(alphabet.clone(), self.counters.clone());
        for q in &self.states {
            ca.add_named_state(q.clone());
        }
        for e in &self.edges {
            let mut inc = vec![0u32; self.counters.len()];
            for (c, v) in &e.inc {
                let i = *cidx.get(c.as_str()).ok_or_else(|| Error::Parse(format!("unknown counter {c:?}")))?;
                inc[i] = *v;
            }
            let from = Self::lookup(&idx, &e.from)?;
            let to = Self::lookup(&idx, &e.to)?;
            ca.add_edge(from, Self::letter(&alphabet, &e.label)?, inc, to);
        }
        for q in &self.initial {
            ca.set_initial(Self::lookup(&idx, q)?);
        }
        for q in &self.finals {
            ca.set_final(Self::lookup(&idx, q)?, true);
        }
        Ok(ca)
    }

    pub fn to_nfa(&self) -> Result<Nfa> {
        if self.edges.iter().any(|e| e.inc.values().any(|&v| v > 0)) {
            return Err(Error::Parse("edges carry increments; expected a plain automaton".into()));
        }
        Ok(self.to_counter_automaton()?.to_nfa())
    }

    pub fn to_labeling(&self) -> Result<LabelingAutomaton> {
        LabelingAutomaton::from_nfa(&self.to_nfa()?)
    }

    fn deterministic_table(&self, alphabet: &Alphabet) -> Result<(usize, Vec<Option<usize>>)> {
        let idx = self.state_index()?;
        if self.initial.len() != 1 {
            return Err(Error::InvalidAutomaton("exactly one initial state required".into()));
        }
        let k = alphabet.len();
        let mut table = vec![None; self.states.len() * k];
        for (i, e) in self.edges.iter().enumerate() {
            let a = Self::letter(alphabet, &e.label)?
                .ok_or_else(|| Error::InvalidAutomaton("ε-edges not allowed here".into()))?;
            let from = Self::lookup(&idx, &e.from)?;
            if table[from * k + a].replace(i).is_some() {
                return Err(Error::InvalidAutomaton(format!("state {} is not deterministic", e.from)));
            }
        }
        if table.iter().any(Option::is_none) {
            return Err(Error::InvalidAutomaton("deterministic table is not complete".into()));
        }
        Ok((Self::lookup(&idx, &self.initial[0])?, table))
    }

    pub fn to_counting(&self) -> Result<CountingAutomaton> {
        let alphabet = parse_alphabet(&self.alphabet)?;
        let idx = self.state_index()?;
        let (initial, table) = self.deterministic_table(&alphabet)?;
        let nc = self.counters.len();
        let cidx: HashMap<&str, usize> = self.counters.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
        let vec_of = |m: &BTreeMap<String, u32>| -> Result<Vec<u32>> {
            let mut v = vec![0; nc];
            for (c, x) in m {
                v[*cidx.get(c.as_str()).ok_or_else(|| Error::Parse(format!("unknown counter {c:?}")))?] = *x;
            }
            Ok(v)
        };
        let delta = table
            .iter()
            .map(|i| {
                let e = &self.edges[i.expect("complete")];
                Ok((Self::lookup(&idx, &e.to)?, vec_of(&e.inc)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let empty = BTreeMap::new();
        let final_inc = self
            .states
            .iter()
            .map(|q| vec_of(self.final_inc.get(q).unwrap_or(&empty)))
            .collect::<Result<Vec<_>>>()?;
        CountingAutomaton::new(alphabet, self.counters.clone(), self.states.clone(), initial, delta, final_inc)
    }

    pub fn to_transducer(&self) -> Result<SequentialTransducer> {
        let alphabet = parse_alphabet(&self.alphabet)?;
        let output = parse_alphabet(
            self.output_alphabet
                .as_ref()
                .ok_or_else(|| Error::Parse("transducer needs `output_alphabet`".into()))?,
        )?;
        let idx = self.state_index()?;
        let (initial, table) = self.deterministic_table(&alphabet)?;
        let word = |s: &str| -> Result<Vec<Letter>> {
            s.chars()
                .map(|c| output.letter(c).ok_or_else(|| Error::Parse(format!("output symbol {c:?} not in output alphabet"))))
                .collect()
        };
        let delta = table
            .iter()
            .map(|i| {
                let e = &self.edges[i.expect("complete")];
                Ok((Self::lookup(&idx, &e.to)?, word(e.output.as_deref().unwrap_or(""))?))
            })
            .collect::<Result<Vec<_>>>()?;
        let final_output = self
            .states
            .iter()
            .map(|q| word(self.final_output.get(q).map(String::as_str).unwrap_or("")))
            .collect::<Result<Vec<_>>>()?;
        SequentialTransducer::new(alphabet, output.clone(), self.states.clone(), initial, delta, final_output)
    }

    pub fn from_nfa(n: &Nfa) -> Self {
        Self::from_counter_automaton(&CounterAutomaton::from_nfa(n))
    }

    pub fn from_counter_automaton(ca: &CounterAutomaton) -> Self {
        let names = unique_names((0..ca.num_states()).map(|q| ca.name(q).to_string()));
        let alphabet = ca.alphabet();
        let mut edges = Vec::new();
        for q in 0..ca.num_states() {
            for e in ca.edges_from(q) {
                let inc = ca
                    .counters()
                    .iter()
                    .zip(&e.inc)
                    .filter(|(_, &v)| v > 0)
                    .map(|(c, &v)| (c.clone(), v))
                    .collect();
                edges.push(EdgeRecord {
                    from: names[q].clone(),
                    label: e.label.map(|a| alphabet.symbol(a).to_string()).unwrap_or_default(),
                    to: names[e.to].clone(),
                    inc,
                    output: None,
                });
            }
        }
        AutomatonFile {
            states: names.clone(),
            alphabet: alphabet_strings(alphabet),
            edges,
            initial: ca.initial().iter().map(|&q| names[q].clone()).collect(),
            finals: (0..ca.num_states()).filter(|&q| ca.is_final(q)).map(|q| names[q].clone()).collect(),
            counters: ca.counters().to_vec(),
            final_inc: BTreeMap::new(),
            output_alphabet: None,
            final_output: BTreeMap::new(),
        }
    }

    pub fn from_counting(a: &CountingAutomaton) -> Self {
        let names = unique_names((0..a.num_states()).map(|q| a.name(q).to_string()));
        let alphabet = a.alphabet();
        let sparse = |v: &[u32]| -> BTreeMap<String, u32> {
            a.counters().iter().zip(v).filter(|(_, &x)| x > 0).map(|(c, &x)| (c.clone(), x)).collect()
        };
        let mut edges = Vec::new();
        for q in 0..a.num_states() {
            for l in alphabet.letters() {
                let (r, v) = a.next(q, l);
                edges.push(EdgeRecord {
                    from: names[q].clone(),
                    label: alphabet.symbol(l).to_string(),
                    to: names[r].clone(),
                    inc: sparse(v),
                    output: None,
                });
            }
        }
        AutomatonFile {
            states: names.clone(),
            alphabet: alphabet_strings(alphabet),
            edges,
            initial: vec![names[a.initial()].clone()],
            finals: names.clone(),
            counters: a.counters().to_vec(),
            final_inc: (0..a.num_states())
                .map(|q| (names[q].clone(), sparse(a.final_inc(q))))
                .filter(|(_, m)| !m.is_empty())
                .collect(),
            output_alphabet: None,
            final_output: BTreeMap::new(),
        }
    }

    pub fn from_transducer(f: &SequentialTransducer) -> Self {
        let names = unique_names((0..f.num_states()).map(|q| f.name(q).to_string()));
        let mut edges = Vec::new();
        for q in 0..f.num_states() {
            for a in f.input().letters() {
                let (r, o) = f.next(q, a);
                edges.push(EdgeRecord {
                    from: names[q].clone(),
                    label: f.input().symbol(a).to_string(),
                    to: names[r].clone(),
                    inc: BTreeMap::new(),
                    output: Some(f.output().format_raw(o)),
                });
            }
        }
        AutomatonFile {
            states: names.clone(),
            alphabet: alphabet_strings(f.input()),
            edges,
            initial: vec![names[f.initial()].clone()],
            finals: names.clone(),
            counters: Vec::new(),
            final_inc: BTreeMap::new(),
            output_alphabet: Some(alphabet_strings(f.output())),
            final_output: (0..f.num_states())
                .filter(|&q| !f.final_output(q).is_empty())
                .map(|q| (names[q].clone(), f.output().format_raw(f.final_output(q))))
                .collect(),
        }
    }
}

/// Graphviz rendering of an automaton.
pub fn to_dot(n: &Nfa) -> String {
    let names = unique_names((0..n.num_states()).map(|q| n.name(q).to_string()));
    let mut s = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
    for (q, name) in names.iter().enumerate() {
        let shape = if n.is_final(q) { "doublecircle" } else { "circle" };
        let _ = writeln!(s, "  n{q} [label={name:?}, shape={shape}];");
    }
    for &q in n.initial() {
        let _ = writeln!(s, "  start{q} [shape=point];\n  start{q} -> n{q};");
    }
    for q in 0..n.num_states() {
        for &(l, r) in n.edges_from(q) {
            let label = l.map(|a| n.alphabet().format_raw(&[a])).unwrap_or_else(|| "ε".into());
            let _ = writeln!(s, "  n{q} -> n{r} [label={label:?}];");
        }
    }
    s.push_str("}\n");
    s
}
