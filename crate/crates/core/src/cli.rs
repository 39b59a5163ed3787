//! The `wqo` command line. Every subcommand calls one library operation and prints its result as
//! text, or as JSON with `--json`. Exit codes: 0 when a decision was computed, 2 when the budget ran
//! out, 1 on bad input.
//!
//! Automaton arguments are file paths (JSON or line format) or inline regular expressions written
//! `re:<regex>`. Words are plain symbol strings, with `ε` or an empty string for the empty word.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::alphabet::{Alphabet, Letter, Word};
use crate::analysis::{
    adherence_member, association_check, counter_unbounded, downward_closure_with_budget, sup_decide,
    upward_closure,
};
use crate::automata::format::{to_dot, AutomatonFile};
use crate::automata::{parse_regex, Nfa, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::ideals::{
    d_embedding, ideal_decompose, ideal_to_nfa, kappa, make_extended_irreducible, parse_ideal, pattern_irreducible,
    period, pump_pattern, pump_word_up, PatternLiteral,
};
use crate::orders::{order_leq, parse_order, upward_closure_word, OrderSpec};
use crate::separability::{
    is_ptl, mod_bound, mod_separate, ptl_separate_with, verify_separator, PtlFormula, SeparabilityVerdict,
    SeparationOptions,
};

#[derive(Parser, Debug)]
#[command(name = "wqo", version, about = "Well-quasi-orders on words: closures, ideals, adherence and separability")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Order: subword, mod:<d>, labeling:<file>, via:<file>><inner>, conj(<o1>,...), counting:<file>, ltt:<k>, morphism:<file>.
    #[arg(long, global = true, default_value = "subword")]
    pub order: String,
    /// Alphabet symbols, e.g. `ab`. Defaults to the symbols of the automata involved.
    #[arg(long, global = true)]
    pub alphabet: Option<String>,
    /// Print structured output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print automata as Graphviz.
    #[arg(long, global = true)]
    pub dot: bool,
    /// Search budget for enumerations.
    #[arg(long, global = true, default_value_t = 4)]
    pub budget: usize,
    /// Keep raising the budget until a verdict is reached.
    #[arg(long, global = true)]
    pub deepen: bool,
    /// Largest modulus `mod-separate` may use.
    #[arg(long = "max-d", global = true, default_value_t = 64)]
    pub max_d: usize,
    /// Run the two search sides concurrently.
    #[arg(long, global = true)]
    pub parallel: bool,
    /// Minimize input automata before use (state counts feed the bounds of `mod-separate` and `pump`).
    #[arg(long, global = true)]
    pub minimize: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide u ⪯ v.
    Compare { u: String, v: String },
    /// Automaton for the upward closure of a word.
    UpWord { w: String },
    /// Automaton for the downward closure of a language.
    Down { automaton: String },
    /// Automaton for the upward closure of a language.
    Up { automaton: String },
    /// Decompose a downward-closed language into ideals.
    Ideals { automaton: String },
    /// Is the word in the ideal?
    Member { ideal: String, word: String },
    /// Residue profile κ_d of a word.
    Kappa { d: usize, word: String },
    /// Period π_d of a loop word.
    Period { d: usize, word: String },
    /// Leftmost witness of u ⊑_d v.
    Embed { d: usize, u: String, v: String },
    /// Is the pattern irreducible?
    Irreducible { pattern: String },
    /// Rewrite an extended pattern into an irreducible one with the same ideal.
    ReducePattern {
        pattern: String,
        /// Bound on loop periods.
        #[arg(long, default_value_t = 4)]
        m: usize,
    },
    /// Is the pattern associated to the language?
    Associate { pattern: String, automaton: String },
    /// Is the counter automaton unbounded (optionally on a language)?
    Unbounded {
        counter_automaton: String,
        #[arg(long)]
        restrict: Option<String>,
    },
    /// Simultaneous unboundedness: is a₁*⋯a_n* ⊆ ↓L?
    Sup { automaton: String, letters: String },
    /// Is the ideal in the adherence of the language?
    Adhere { ideal: String, automaton: String },
    /// Separate K from L by a boolean combination of upward closures.
    Separate { k: String, l: String },
    /// Check a separating formula.
    Verify { formula: String, k: String, l: String },
    /// Is L a boolean combination of upward closures?
    IsPtl { automaton: String },
    /// Separate K from L by modular predicates of any modulus.
    ModSeparate { k: String, l: String },
    /// The modulus bound 2·(m³)!.
    ModBound { m: usize },
    /// Lift an extended pattern (or, with --word, a word) from modulus d to ℓ·d.
    Pump {
        automaton: String,
        pattern: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        ell: usize,
        #[arg(long)]
        word: Option<String>,
    },
}

/// Result of one invocation: exit code plus what would go to stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Status {
    Decided,
    Inconclusive,
}

/// Parses `argv` (program name first) and runs the command.
pub fn run_cli<I, T>(argv: I) -> CliOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CliOutcome { code, stdout: text, stderr: String::new() }
            } else {
                CliOutcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut out = String::new();
    match run(&cli, &mut out) {
        Ok(Status::Decided) => CliOutcome { code: 0, stdout: out, stderr: String::new() },
        Ok(Status::Inconclusive) => CliOutcome { code: 2, stdout: out, stderr: String::new() },
        Err(Error::Inconclusive(b)) => {
            CliOutcome { code: 2, stdout: out, stderr: format!("inconclusive at budget {b}\n") }
        }
        Err(e) => CliOutcome { code: 1, stdout: out, stderr: format!("error: {e}\n") },
    }
}

fn load_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))
}

struct Ctx<'a> {
    g: &'a Global,
}

impl Ctx<'_> {
    fn given_alphabet(&self) -> Result<Option<Alphabet>> {
        self.g.alphabet.as_deref().map(Alphabet::from_chars).transpose()
    }

    /// Loads automata, lifting them to one common alphabet.
    fn automata(&self, srcs: &[&str]) -> Result<(Alphabet, Vec<Nfa>)> {
        let given = self.given_alphabet()?;
        let raw: Vec<Nfa> = srcs
            .iter()
            .map(|s| match s.strip_prefix("re:") {
                Some(r) => parse_regex(r, given.as_ref()),
                None => AutomatonFile::parse(&load_file(s)?)?.to_nfa(),
            })
            .collect::<Result<_>>()?;
        let alphabet = match given {
            Some(a) => a,
            None => raw.iter().fold(None::<Alphabet>, |acc, n| Some(acc.map_or(n.alphabet().clone(), |a| a.union(n.alphabet())))).expect("at least one automaton"),
        };
        let mut lifted: Vec<Nfa> = raw.iter().map(|n| n.with_alphabet(&alphabet)).collect::<Result<_>>()?;
        if self.g.minimize {
            lifted = lifted.iter().map(|n| n.minimize(DEFAULT_STATE_CAP)).collect::<Result<_>>()?;
        }
        Ok((alphabet, lifted))
    }

    fn order(&self, alphabet: &Alphabet) -> Result<OrderSpec> {
        parse_order(&self.g.order, alphabet, &load_file)
    }

    /// Alphabet for commands without automata: `--alphabet`, else the symbols of the given texts.
    fn alphabet_for(&self, texts: &[&str]) -> Result<Alphabet> {
        if let Some(a) = self.given_alphabet()? {
            return Ok(a);
        }
        let mut symbols: Vec<char> = texts
            .iter()
            .flat_map(|t| t.chars())
            .filter(|c| c.is_alphanumeric() && *c != 'ε')
            .collect();
        symbols.sort();
        symbols.dedup();
        if symbols.is_empty() {
            symbols = vec!['a', 'b'];
        }
        Alphabet::new(symbols)
    }

    fn budget(&self) -> usize {
        if self.g.deepen {
            usize::MAX
        } else {
            self.g.budget
        }
    }

    fn print_nfa(&self, out: &mut String, n: &Nfa) {
        if self.g.dot {
            out.push_str(&to_dot(n));
        } else if self.g.json {
            out.push_str(&AutomatonFile::from_nfa(n).to_json());
            out.push('\n');
        } else {
            out.push_str(&AutomatonFile::from_nfa(n).to_lines());
        }
    }

    fn print_bool(&self, out: &mut String, key: &str, value: bool, extra: serde_json::Value) {
        if self.g.json {
            let mut v = json!({ key: value });
            if let (Some(obj), serde_json::Value::Object(more)) = (v.as_object_mut(), extra) {
                obj.extend(more);
            }
            let _ = writeln!(out, "{v}");
        } else {
            let _ = writeln!(out, "{value}");
        }
    }
}

fn word(alphabet: &Alphabet, s: &str) -> Result<Word> {
    alphabet.parse_word(s)
}

fn run(cli: &Cli, out: &mut String) -> Result<Status> {
    let ctx = Ctx { g: &cli.global };
    match &cli.command {
        Command::Compare { u, v } => {
            let alphabet = ctx.alphabet_for(&[u, v])?;
            let o = ctx.order(&alphabet)?;
            let r = order_leq(&o, &word(&alphabet, u)?, &word(&alphabet, v)?)?;
            ctx.print_bool(out, "leq", r, json!({}));
        }
        Command::UpWord { w } => {
            let alphabet = ctx.alphabet_for(&[w])?;
            let o = ctx.order(&alphabet)?;
            ctx.print_nfa(out, &upward_closure_word(&o, &word(&alphabet, w)?)?.trim());
        }
        Command::Down { automaton } => {
            let (alphabet, ns) = ctx.automata(&[automaton])?;
            let o = ctx.order(&alphabet)?;
            ctx.print_nfa(out, &downward_closure_with_budget(&o, &ns[0], ctx.g.budget)?.trim());
        }
        Command::Up { automaton } => {
            let (alphabet, ns) = ctx.automata(&[automaton])?;
            let o = ctx.order(&alphabet)?;
            ctx.print_nfa(out, &upward_closure(&o, &ns[0])?.trim());
        }
        Command::Ideals { automaton } => {
            let (alphabet, ns) = ctx.automata(&[automaton])?;
            let o = ctx.order(&alphabet)?;
            let parts = ideal_decompose(&o, &ns[0])?;
            let shown: Vec<String> = parts.iter().map(|p| p.display(&o).to_string()).collect();
            if ctx.g.json {
                let _ = writeln!(out, "{}", json!({ "ideals": shown }));
            } else {
                for s in shown {
                    let _ = writeln!(out, "{s}");
                }
            }
        }
        Command::Member { ideal, word: w } => {
            let alphabet = ctx.alphabet_for(&[ideal, w])?;
            let o = ctx.order(&alphabet)?;
            let i = parse_ideal(&o, ideal)?;
            let r = ideal_to_nfa(&o, &i)?.accepts(&word(&alphabet, w)?);
            ctx.print_bool(out, "member", r, json!({}));
        }
        Command::Kappa { d, word: w } => {
            let alphabet = ctx.alphabet_for(&[w])?;
            let p = kappa(positive(*d)?, &word(&alphabet, w)?);
            if ctx.g.json {
                let sets: Vec<String> = p.sets.iter().map(|s| alphabet.format_raw(&s.iter().copied().collect::<Vec<_>>())).collect();
                let _ = writeln!(out, "{}", json!({ "d": d, "kappa": sets }));
            } else {
                let _ = writeln!(out, "{}", p.display(&alphabet));
            }
        }
        Command::Period { d, word: w } => {
            let alphabet = ctx.alphabet_for(&[w])?;
            let t = period(positive(*d)?, &word(&alphabet, w)?);
            if ctx.g.json {
                let _ = writeln!(out, "{}", json!({ "period": t }));
            } else {
                let _ = writeln!(out, "{t}");
            }
        }
        Command::Embed { d, u, v } => {
            let alphabet = ctx.alphabet_for(&[u, v])?;
            let e = d_embedding(positive(*d)?, &word(&alphabet, u)?, &word(&alphabet, v)?);
            if ctx.g.json {
                let _ = writeln!(out, "{}", json!({ "embedding": e }));
            } else {
                match e {
                    Some(m) => {
                        let s: Vec<String> = m.iter().map(usize::to_string).collect();
                        let _ = writeln!(out, "({})", s.join(","));
                    }
                    None => {
                        let _ = writeln!(out, "none");
                    }
                }
            }
        }
        Command::Irreducible { pattern } => {
            let alphabet = ctx.alphabet_for(&[pattern])?;
            let o = ctx.order(&alphabet)?;
            let r = pattern_irreducible(&o, &parse_ideal(&o, pattern)?)?;
            ctx.print_bool(out, "irreducible", r, json!({}));
        }
        Command::ReducePattern { pattern, m } => {
            let alphabet = ctx.alphabet_for(&[pattern])?;
            let o = ctx.order(&alphabet)?;
            let OrderSpec::Mod { d, .. } = &o else {
                return Err(Error::Unsupported("reduce-pattern needs --order mod:<d>".into()));
            };
            let p = PatternLiteral::parse(pattern, &alphabet)?.to_ext(*d)?;
            let q = make_extended_irreducible(&o, &p, *m)?;
            let shown = q.display(&alphabet).to_string();
            if ctx.g.json {
                let _ = writeln!(out, "{}", json!({ "pattern": shown }));
            } else {
                let _ = writeln!(out, "{shown}");
            }
        }
        Command::Associate { pattern, automaton } => {
            let (alphabet, ns) = ctx.automata(&[automaton])?;
            let o = ctx.order(&alphabet)?;
            let r = association_check(&o, &parse_ideal(&o, pattern)?, &ns[0])?;
            ctx.print_bool(out, "associated", r, json!({}));
        }
        Command::Unbounded { counter_automaton, restrict } => {
            let ca = AutomatonFile::parse(&load_file(counter_automaton)?)?.to_counter_automaton()?;
            let r = match restrict {
                Some(src) => {
                    let given = ctx.given_alphabet()?.unwrap_or_else(|| ca.alphabet().clone());
                    let n = match src.strip_prefix("re:") {
                        Some(re) => parse_regex(re, Some(&given))?,
                        None => AutomatonFile::parse(&load_file(src)?)?.to_nfa()?,
                    };
                    counter_unbounded(&ca, Some(&n.with_alphabet(ca.alphabet())?))?
                }
                None => counter_unbounded(&ca, None)?,
            };
            if ctx.g.json {
                let _ = writeln!(out, "{}", serde_json::to_string(&r).expect("serializable"));
            } else {
                let _ = writeln!(out, "{}", r.unbounded);
                if let Some(w) = &r.witness {
                    for c in &w.path {
                        let _ = writeln!(out, "  {{{}}} covers [{}]", c.states.join(","), c.covered.join(","));
                    }
                }
            }
        }
        Command::Sup { automaton, letters } => {
            let (alphabet, ns) = ctx.automata(&[automaton])?;
            let ls: Vec<Letter> = word(&alphabet, letters)?;
            let r = sup_decide(&ns[0], &ls)?;
            ctx.print_bool(out, "sup", r, json!({}));
        }
        Command::Adhere { ideal, automaton } => {
            let (alphabet, ns) = ctx.automata(&[automaton])?;
            let o = ctx.order(&alphabet)?;
            let r = adherence_member(&o, &parse_ideal(&o, ideal)?, &ns[0])?;
            ctx.print_bool(out, "adherent", r, json!({}));
        }
        Command::Separate { k, l } => {
            let (alphabet, ns) = ctx.automata(&[k, l])?;
            let o = ctx.order(&alphabet)?;
            let opts = SeparationOptions { budget: ctx.budget(), parallel: ctx.g.parallel, ..Default::default() };
            let v = ptl_separate_with(&o, &ns[0], &ns[1], &opts)?;
            return Ok(print_verdict(&ctx, out, &o, &v));
        }
        Command::Verify { formula, k, l } => {
            let (alphabet, ns) = ctx.automata(&[k, l])?;
            let o = ctx.order(&alphabet)?;
            let f = PtlFormula::parse(formula, &alphabet)?;
            let r = verify_separator(&o, &f, &ns[0], &ns[1])?;
            ctx.print_bool(out, "separates", r, json!({}));
        }
        Command::IsPtl { automaton } => {
            let (alphabet, ns) = ctx.automata(&[automaton])?;
            let o = ctx.order(&alphabet)?;
            let v = is_ptl(&o, &ns[0], ctx.budget())?;
            return Ok(print_verdict(&ctx, out, &o, &v));
        }
        Command::ModSeparate { k, l } => {
            let (_, ns) = ctx.automata(&[k, l])?;
            let r = mod_separate(&ns[0], &ns[1], ctx.g.max_d, ctx.budget())?;
            if ctx.g.json {
                let _ = writeln!(out, "{}", serde_json::to_string(&r.report(&ns[0])?).expect("serializable"));
            } else {
                let o = OrderSpec::modulo(r.d_used.max(1), ns[0].alphabet().clone())?;
                print_verdict(&ctx, out, &o, &r.verdict);
                let _ = writeln!(out, "d_used: {}\ndefinitive: {}\nbound: {}", r.d_used, r.definitive, r.bound);
            }
            return Ok(if r.definitive { Status::Decided } else { Status::Inconclusive });
        }
        Command::ModBound { m } => {
            let b = mod_bound(positive(*m)?);
            if ctx.g.json {
                let _ = writeln!(out, "{}", json!({ "bound": b.to_string() }));
            } else {
                let _ = writeln!(out, "{b}");
            }
        }
        Command::Pump { automaton, pattern, m, d, ell, word: w } => {
            let (alphabet, ns) = ctx.automata(&[automaton])?;
            let lit = PatternLiteral::parse(pattern, &alphabet)?.to_ext(positive(*d)?)?;
            match w {
                Some(u) => {
                    if lit.num_loops() != 1 {
                        return Err(Error::InvalidPattern("pumping a word needs a single loop `(v)[r]`".into()));
                    }
                    let p = pump_word_up(&ns[0], *m, *d, &lit.loops()[0], lit.residues[0], &word(&alphabet, u)?, *ell)?;
                    if ctx.g.json {
                        let _ = writeln!(out, "{}", json!({ "word": alphabet.format_word(&p.word), "strategy": p.strategy }));
                    } else {
                        let _ = writeln!(out, "{}", alphabet.format_word(&p.word));
                    }
                }
                None => {
                    let q = pump_pattern(&ns[0], *m, *d, &lit, *ell)?;
                    let shown = q.display(&alphabet).to_string();
                    if ctx.g.json {
                        let _ = writeln!(out, "{}", json!({ "pattern": shown, "d": ell * d }));
                    } else {
                        let _ = writeln!(out, "{shown}");
                    }
                }
            }
        }
    }
    Ok(Status::Decided)
}

fn positive(n: usize) -> Result<usize> {
    if n == 0 {
        Err(Error::Precondition("expected a positive integer".into()))
    } else {
        Ok(n)
    }
}

fn print_verdict(ctx: &Ctx, out: &mut String, o: &OrderSpec, v: &SeparabilityVerdict) -> Status {
    if ctx.g.json {
        let _ = writeln!(out, "{}", serde_json::to_string(&v.report(o)).expect("serializable"));
    } else {
        match v {
            SeparabilityVerdict::Separable { formula, .. } => {
                let _ = writeln!(out, "SEPARABLE formula: {}", formula.display(o.alphabet()));
            }
            SeparabilityVerdict::Inseparable { certificate } => {
                let _ = writeln!(out, "INSEPARABLE certificate: {}", certificate.display(o));
            }
            SeparabilityVerdict::Inconclusive { budget } => {
                let _ = writeln!(out, "INCONCLUSIVE budget: {budget}");
            }
        }
    }
    if v.is_inconclusive() {
        Status::Inconclusive
    } else {
        Status::Decided
    }
}

