//! Line-oriented text formats for string-tree automata and ranked tree
//! automata. `#` starts a comment when it begins a line or follows
//! whitespace.

use std::collections::BTreeSet;
use std::fmt::Write;

use super::{
    AutomatonError, FiniteAutomaton, Flavour, Fsta, FstaBuilder, Ncfta, NcftaRule, StateId,
    StateLabel,
};
use crate::term::Signature;

const RESERVED: [char; 4] = ['<', '>', '/', '\\'];

fn strip_comment(line: &str) -> &str {
    let mut prev_space = true;
    for (i, c) in line.char_indices() {
        if c == '#' && prev_space {
            return &line[..i];
        }
        prev_space = c.is_whitespace();
    }
    line
}

/// Non-empty lines as `(line number, key, rest)`.
fn entries(text: &str) -> Result<Vec<(usize, &str, &str)>, AutomatonError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(':').ok_or_else(|| AutomatonError::Format {
            line: i + 1,
            message: format!("expected `key: value`, got `{line}`"),
        })?;
        out.push((i + 1, key.trim(), rest.trim()));
    }
    Ok(out)
}

fn format_err(line: usize, message: impl Into<String>) -> AutomatonError {
    AutomatonError::Format {
        line,
        message: message.into(),
    }
}

/// Parses the automaton format:
///
/// ```text
/// flavour: nfsta
/// alphabet: a b
/// states: q0
/// initial: q0
/// final: q0 a b
/// hrule: q0 a -> a
/// ```
///
/// A single-character token naming an alphabet symbol denotes that symbol
/// as a state. `vrule: q -> p` lines are accepted for `gnfsta` only.
pub fn parse_fsta(text: &str) -> Result<Fsta, AutomatonError> {
    let entries = entries(text)?;
    let mut flavour = None;
    let mut alphabet = BTreeSet::new();
    for &(line, key, rest) in &entries {
        match key {
            "flavour" => {
                flavour = Some(match rest {
                    "dfsta" => Flavour::Deterministic,
                    "nfsta" => Flavour::Nondeterministic,
                    "gnfsta" => Flavour::Generalised,
                    other => return Err(format_err(line, format!("unknown flavour `{other}`"))),
                })
            }
            "alphabet" => {
                for tok in rest.split_whitespace() {
                    let mut chars = tok.chars();
                    match (chars.next(), chars.next()) {
                        (Some(c), None) if !RESERVED.contains(&c) => {
                            alphabet.insert(c);
                        }
                        _ => {
                            return Err(format_err(
                                line,
                                format!("alphabet entry `{tok}` is not a single symbol"),
                            ))
                        }
                    }
                }
            }
            _ => {}
        }
    }
    let flavour = flavour.ok_or_else(|| format_err(1, "missing `flavour:` line"))?;
    let mut b = Fsta::builder(flavour, alphabet);

    for &(line, key, rest) in &entries {
        if key == "states" {
            for tok in rest.split_whitespace() {
                if resolve(&b, tok).is_some() {
                    return Err(format_err(line, format!("state `{tok}` declared twice")));
                }
                b.state(tok);
            }
        }
    }
    let state = |b: &FstaBuilder, line: usize, tok: &str| {
        resolve(b, tok).ok_or_else(|| format_err(line, format!("unknown state `{tok}`")))
    };
    for &(line, key, rest) in &entries {
        match key {
            "flavour" | "alphabet" | "states" => {}
            "initial" | "initials" => {
                for tok in rest.split_whitespace() {
                    let q = state(&b, line, tok)?;
                    b.initial(q);
                }
            }
            "final" | "finals" => {
                for tok in rest.split_whitespace() {
                    let q = state(&b, line, tok)?;
                    b.final_state(q);
                }
            }
            "hrule" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                let [p, r, "->", c] = toks[..] else {
                    return Err(format_err(line, "expected `hrule: q a -> p`"));
                };
                let (p, r, c) = (
                    state(&b, line, p)?,
                    state(&b, line, r)?,
                    state(&b, line, c)?,
                );
                b.hrule(p, r, c);
            }
            "vrule" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                let [p, "->", c] = toks[..] else {
                    return Err(format_err(line, "expected `vrule: q -> p`"));
                };
                let (p, c) = (state(&b, line, p)?, state(&b, line, c)?);
                b.vrule(p, c);
            }
            other => return Err(format_err(line, format!("unknown key `{other}`"))),
        }
    }
    b.build()
}

fn resolve(b: &FstaBuilder, tok: &str) -> Option<StateId> {
    let mut chars = tok.chars();
    if let (Some(c), None) = (chars.next(), chars.clone().next()) {
        if let Some(q) = b.symbol(c) {
            return Some(q);
        }
    }
    b.lookup(&StateLabel::Named(tok.to_string()))
}

/// Writes `a` in the format read by [`parse_fsta`]. States and rules are
/// listed in state order, so the output is deterministic.
pub fn write_fsta(a: &Fsta) -> String {
    let name = |q: StateId| a.label(q).to_string();
    let names = |qs: &mut dyn Iterator<Item = StateId>| qs.map(name).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    writeln!(out, "flavour: {}", a.flavour().keyword()).unwrap();
    let alphabet: Vec<String> = a.alphabet().iter().map(char::to_string).collect();
    writeln!(out, "alphabet: {}", alphabet.join(" ")).unwrap();
    let line = |key: &str, value: String| {
        if value.is_empty() {
            format!("{key}:\n")
        } else {
            format!("{key}: {value}\n")
        }
    };
    out += &line(
        "states",
        names(&mut a.states().filter(|q| !a.is_symbol(*q))),
    );
    let key = if a.flavour() == Flavour::Generalised {
        "initials"
    } else {
        "initial"
    };
    out += &line(key, names(&mut a.initials().iter().copied()));
    out += &line("final", names(&mut a.finals().iter().copied()));
    for &(p, r, c) in a.hrules() {
        writeln!(out, "hrule: {} {} -> {}", name(p), name(r), name(c)).unwrap();
    }
    for &(p, c) in a.vrules() {
        writeln!(out, "vrule: {} -> {}", name(p), name(c)).unwrap();
    }
    out
}

/// Parses a ranked tree automaton:
///
/// ```text
/// arity: + 2
/// arity: 1 0
/// states: q
/// final: q
/// rule: +(q,q) -> q
/// rule: 1 -> q
/// ```
pub fn parse_ncfta(text: &str) -> Result<Ncfta, AutomatonError> {
    let mut c = Ncfta {
        signature: Signature::new(),
        states: BTreeSet::new(),
        finals: BTreeSet::new(),
        rules: Vec::new(),
    };
    for (line, key, rest) in entries(text)? {
        match key {
            "arity" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                let [name, n] = toks[..] else {
                    return Err(format_err(line, "expected `arity: name N`"));
                };
                let n = n
                    .parse()
                    .map_err(|_| format_err(line, format!("bad arity `{n}`")))?;
                c.signature.insert(name.to_string(), n);
            }
            "states" => c.states.extend(rest.split_whitespace().map(str::to_string)),
            "final" | "finals" => c.finals.extend(rest.split_whitespace().map(str::to_string)),
            "rule" => {
                let (lhs, target) = rest
                    .split_once("->")
                    .ok_or_else(|| format_err(line, "expected `rule: f(q1,...) -> q`"))?;
                let lhs = lhs.trim();
                let (symbol, args) = match lhs.split_once('(') {
                    Some((f, tail)) => {
                        let inner = tail
                            .strip_suffix(')')
                            .ok_or_else(|| format_err(line, "missing `)`"))?;
                        let args = inner.split(',').map(|s| s.trim().to_string()).collect();
                        (f.trim().to_string(), args)
                    }
                    None => (lhs.to_string(), Vec::new()),
                };
                c.rules.push(NcftaRule {
                    symbol,
                    args,
                    target: target.trim().to_string(),
                });
            }
            other => return Err(format_err(line, format!("unknown key `{other}`"))),
        }
    }
    c.validate()?;
    Ok(c)
}

/// Parses a string automaton:
///
/// ```text
/// alphabet: a b
/// states: q0 q1
/// initial: q0
/// final: q1
/// move: q0 a -> q1
/// ```
///
/// States are created in order of first mention.
pub fn parse_fa(text: &str) -> Result<FiniteAutomaton, AutomatonError> {
    let entries = entries(text)?;
    let mut alphabet = BTreeSet::new();
    let mut names: Vec<String> = Vec::new();
    let mut initial = None;
    for &(line, key, rest) in &entries {
        match key {
            "alphabet" => {
                for tok in rest.split_whitespace() {
                    let mut chars = tok.chars();
                    match (chars.next(), chars.next()) {
                        (Some(c), None) if !RESERVED.contains(&c) => {
                            alphabet.insert(c);
                        }
                        _ => return Err(format_err(line, format!("bad symbol `{tok}`"))),
                    }
                }
            }
            "states" => names.extend(rest.split_whitespace().map(str::to_string)),
            "initial" => initial = Some((line, rest.to_string())),
            "final" | "move" => {}
            other => return Err(format_err(line, format!("unknown key `{other}`"))),
        }
    }
    let (line, first) = initial.ok_or_else(|| format_err(0, "missing `initial:`"))?;
    let index = |names: &[String], tok: &str, line: usize| {
        names
            .iter()
            .position(|n| n == tok)
            .ok_or_else(|| format_err(line, format!("unknown state `{tok}`")))
    };
    let q0 = index(&names, &first, line)?;
    let mut fa = FiniteAutomaton::new(alphabet);
    fa.state_names = names.clone();
    fa.initial = q0;
    for &(line, key, rest) in &entries {
        match key {
            "final" => {
                for tok in rest.split_whitespace() {
                    fa.set_final(index(&names, tok, line)?);
                }
            }
            "move" => {
                let (lhs, to) = rest
                    .split_once("->")
                    .ok_or_else(|| format_err(line, "expected `move: q a -> p`"))?;
                let toks: Vec<&str> = lhs.split_whitespace().collect();
                let [from, letter] = toks[..] else {
                    return Err(format_err(line, "expected `move: q a -> p`"));
                };
                let mut chars = letter.chars();
                let c = match (chars.next(), chars.next()) {
                    (Some(c), None) if fa.alphabet.contains(&c) => c,
                    _ => return Err(format_err(line, format!("`{letter}` is not in the alphabet"))),
                };
                let (p, q) = (index(&names, from, line)?, index(&names, to.trim(), line)?);
                fa.add_transition(p, c, q);
            }
            _ => {}
        }
    }
    Ok(fa)
}

/// Writes `fa` in the format read by [`parse_fa`].
pub fn write_fa(fa: &FiniteAutomaton) -> String {
    let mut out = String::new();
    let alphabet: Vec<String> = fa.alphabet.iter().map(char::to_string).collect();
    writeln!(out, "alphabet: {}", alphabet.join(" ")).unwrap();
    writeln!(out, "states: {}", fa.state_names.join(" ")).unwrap();
    writeln!(out, "initial: {}", fa.state_names[fa.initial]).unwrap();
    let finals: Vec<&str> = fa.finals.iter().map(|q| fa.state_names[*q].as_str()).collect();
    writeln!(out, "final: {}", finals.join(" ")).unwrap();
    for (p, c, q) in fa.transitions() {
        writeln!(out, "move: {} {c} -> {}", fa.state_names[p], fa.state_names[q]).unwrap();
    }
    out
}
