use std::path::PathBuf;

use wqo_core::alphabet::Alphabet;
use wqo_core::automata::format::AutomatonFile;
use wqo_core::automata::parse_regex;
use wqo_core::cli::{run_cli, CliOutcome};

fn run(args: &[&str]) -> CliOutcome {
    run_cli(std::iter::once("wqo").chain(args.iter().copied()))
}

fn out(args: &[&str]) -> String {
    let r = run(args);
    assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
    r.stdout.trim().to_string()
}

/// Writes the automaton of `regex` to a fresh file in the line format.
fn aut(name: &str, regex: &str) -> PathBuf {
    let ab = Alphabet::from_chars("ab").unwrap();
    let dir = std::env::temp_dir().join(format!("wqo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("{name}.aut"));
    std::fs::write(&path, AutomatonFile::from_nfa(&parse_regex(regex, Some(&ab)).unwrap()).to_lines()).unwrap();
    path
}

fn verdict_payload(line: &str) -> &str {
    line.split_once(": ").map(|(_, p)| p).unwrap_or("")
}

#[test]
fn spec_examples() {
    assert_eq!(out(&["compare", "--order", "mod:2", "ab", "abab"]), "true");
    assert_eq!(out(&["mod-bound", "2"]), "80640");
    let (k, l) = (aut("even", "(aa)*"), aut("odd", "a(aa)*"));
    let r = out(&["separate", "--order", "subword", k.to_str().unwrap(), l.to_str().unwrap(), "--budget", "4"]);
    assert_eq!(r, "INSEPARABLE certificate: (a)*");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["compare", "ab", "ba"]).code, 0);
    assert_eq!(out(&["compare", "ab", "ba"]), "false");
    assert_eq!(run(&["nonsense"]).code, 1);
    assert_eq!(run(&["compare", "--order", "mod:x", "a", "b"]).code, 1);
    assert_eq!(run(&["separate", "re:(a", "re:b"]).code, 1);
    assert_eq!(run(&["down", "/nonexistent/file.aut"]).code, 1);
    let r = run(&["mod-separate", "re:a*", "re:b(a|b)*", "--max-d", "1", "--budget", "1"]);
    assert!(r.code == 0 || r.code == 2, "{}", r.stderr);
}

#[test]
fn certificates_round_trip_through_adhere_and_verify() {
    let cases = [
        ("subword", "re:(aa)*", "re:a(aa)*"),
        ("subword", "re:(ab)*", "re:a*"),
        ("mod:2", "re:a(abba)*", "re:b(abba)*"),
        ("mod:2", "re:(ab)*", "re:(ba)*b"),
        ("subword", "re:a+", "re:b+"),
    ];
    for (order, k, l) in cases {
        let line = out(&["separate", "--order", order, k, l]);
        let payload = verdict_payload(&line);
        if line.starts_with("INSEPARABLE") {
            assert_eq!(out(&["adhere", "--order", order, payload, k]), "true", "{line}");
            assert_eq!(out(&["adhere", "--order", order, payload, l]), "true", "{line}");
        } else {
            assert!(line.starts_with("SEPARABLE"), "{line}");
            assert_eq!(out(&["verify", "--order", order, payload, k, l]), "true", "{line}");
        }
    }
}

#[test]
fn json_output_is_deterministic() {
    let args = ["separate", "--json", "--order", "mod:2", "re:a(abba)*", "re:b(abba)*"];
    let first = out(&args);
    assert_eq!(first, out(&args));
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["verdict"], "inseparable");
    let b: serde_json::Value = serde_json::from_str(&out(&["mod-bound", "--json", "2"])).unwrap();
    assert_eq!(b["bound"], "80640");
}

#[test]
fn word_level_commands() {
    assert_eq!(out(&["period", "4", "abab"]), "2");
    assert_eq!(out(&["embed", "2", "ab", "abab"]), "(1,2)");
    assert_eq!(out(&["member", "--order", "mod:2", "(ab)[0]", "abab"]), "true");
    assert_eq!(out(&["member", "--order", "mod:2", "(ab)[0]", "ba"]), "false");
    assert_eq!(out(&["irreducible", "--order", "mod:2", "a (abba)"]), "true");
    assert_eq!(out(&["sup", "re:a*b*", "ab"]), "true");
    assert_eq!(out(&["is-ptl", "re:(a|b)*a(a|b)*"]).split(':').next().unwrap(), "SEPARABLE formula");
}

#[test]
fn closures_print_automata() {
    let down = out(&["down", "--order", "subword", "re:ab"]);
    let n = AutomatonFile::parse(&down).unwrap().to_nfa().unwrap();
    let ab = n.alphabet().clone();
    for (w, want) in [("", true), ("b", true), ("ab", true), ("ba", false)] {
        assert_eq!(n.accepts(&ab.parse_word(w).unwrap()), want, "{w}");
    }
    assert!(out(&["up", "--dot", "re:ab"]).starts_with("digraph"));
    assert_eq!(out(&["ideals", "--order", "subword", "re:a*|a*b"]), "(a)* b");
}
