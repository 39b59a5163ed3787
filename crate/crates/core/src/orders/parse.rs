//! The order mini-language: `subword`, `mod:<d>`, `labeling:<file>`, `via:<file>><inner>`,
//! `conj(<o1>,<o2>,...)`, `counting:<file>`, `ltt:<k>`, `morphism:<file>`.

use crate::alphabet::Alphabet;
use crate::automata::format::AutomatonFile;
use crate::error::{Error, Result};
use crate::orders::{MorphismFile, OrderSpec};

/// Parses an order over `alphabet`; `load` resolves file names to their contents.
pub fn parse_order(src: &str, alphabet: &Alphabet, load: &dyn Fn(&str) -> Result<String>) -> Result<OrderSpec> {
    let s = src.trim();
    if s == "subword" {
        return Ok(OrderSpec::subword(alphabet.clone()));
    }
    if let Some(rest) = s.strip_prefix("conj(") {
        let body = rest.strip_suffix(')').ok_or_else(|| Error::Parse(format!("unbalanced conjunction {s:?}")))?;
        let parts = split_top_level(body)?
            .into_iter()
            .map(|p| parse_order(p, alphabet, load))
            .collect::<Result<Vec<_>>>()?;
        return OrderSpec::conj(parts);
    }
    let (kind, arg) = s.split_once(':').ok_or_else(|| Error::Parse(format!("unknown order {s:?}")))?;
    let number = |arg: &str| -> Result<usize> {
        arg.trim().parse().map_err(|_| Error::Parse(format!("expected a positive integer, got {arg:?}")))
    };
    match kind {
        "mod" => OrderSpec::modulo(number(arg)?, alphabet.clone()),
        "ltt" => OrderSpec::ltt(number(arg)?, alphabet.clone()),
        "labeling" => {
            let a = AutomatonFile::parse(&load(arg)?)?.to_labeling()?;
            a.alphabet().ensure_same(alphabet)?;
            Ok(OrderSpec::labeling(a))
        }
        "counting" => {
            let a = AutomatonFile::parse(&load(arg)?)?.to_counting()?;
            a.alphabet().ensure_same(alphabet)?;
            Ok(OrderSpec::counting(a))
        }
        "morphism" => {
            let m = MorphismFile::parse(&load(arg)?)?;
            m.alphabet.ensure_same(alphabet)?;
            Ok(OrderSpec::morphism(m))
        }
        "via" => {
            let (file, inner) =
                arg.split_once('>').ok_or_else(|| Error::Parse(format!("expected via:<file>><inner>, got {s:?}")))?;
            let f = AutomatonFile::parse(&load(file)?)?.to_transducer()?;
            f.input().ensure_same(alphabet)?;
            let inner = parse_order(inner, f.output(), load)?;
            OrderSpec::via(f, inner)
        }
        other => Err(Error::Parse(format!("unknown order kind {other:?}"))),
    }
}

fn split_top_level(s: &str) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse("unbalanced parentheses in order".into()));
        }
    }
    parts.push(&s[start..]);
    Ok(parts)
}
