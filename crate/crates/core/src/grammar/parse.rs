//! Grammar text format:
//!
//! ```text
//! alphabet: a b          # optional; inferred from the rules otherwise
//! nonterminals: S Item   # optional; rule sides and the axiom are implied
//! start: S
//! rule: S -> < (a | Item)* >
//! ```
//!
//! Right-hand sides use juxtaposition, `|`, `*`, parentheses and `eps`.
//! A run of letters and digits starting with an uppercase ASCII letter is
//! a nonterminal name; declared names are also recognised verbatim.
//! Every other character is a one-symbol terminal, and `\c` escapes `c`.

use std::collections::BTreeSet;

use super::{needs_escape, GSym, GrammarError, Regex, Rstg, Rule};

fn syntax(line: usize, message: impl Into<String>) -> GrammarError {
    GrammarError::Syntax {
        line,
        message: message.into(),
    }
}

fn strip_comment(line: &str) -> &str {
    let mut prev_space = true;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        if c == '#' && prev_space && !escaped {
            return &line[..i];
        }
        escaped = c == '\\' && !escaped;
        prev_space = c.is_whitespace();
    }
    line
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Sym(GSym),
    Eps,
    Op(char),
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str, names: &BTreeSet<String>, line: usize) -> Result<Vec<Token>, GrammarError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let rest: String = chars[i..].iter().collect();
        let run: String = if c.is_ascii_uppercase() {
            chars[i..]
                .iter()
                .take_while(|c| is_name_char(**c))
                .collect()
        } else {
            String::new()
        };
        let declared = names
            .iter()
            .filter(|n| rest.starts_with(n.as_str()))
            .max_by_key(|n| n.len());
        if !run.is_empty() && names.contains(&run) {
            out.push(Token::Sym(GSym::N(run.clone())));
            i += run.chars().count();
        } else if let Some(n) = declared {
            out.push(Token::Sym(GSym::N(n.clone())));
            i += n.chars().count();
        } else if !run.is_empty() {
            return Err(GrammarError::UnknownNonterminal(run));
        } else if rest.starts_with("eps") && !chars.get(i + 3).is_some_and(|c| is_name_char(*c)) {
            out.push(Token::Eps);
            i += 3;
        } else if c == '\\' {
            let e = chars
                .get(i + 1)
                .ok_or_else(|| syntax(line, "dangling `\\`"))?;
            out.push(Token::Sym(GSym::T(*e)));
            i += 2;
        } else if "()|*".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else if "<>".contains(c) {
            return Err(syntax(line, format!("unexpected `{c}` inside a rule body")));
        } else {
            out.push(Token::Sym(GSym::T(c)));
            i += 1;
        }
    }
    Ok(out)
}

struct RegexParser<'a> {
    tokens: &'a [Token],
    pos: usize,
    line: usize,
}

impl RegexParser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn union(&mut self) -> Result<Regex<GSym>, GrammarError> {
        let mut branches = vec![self.concat()?];
        while self.peek() == Some(&Token::Op('|')) {
            self.pos += 1;
            branches.push(self.concat()?);
        }
        Ok(if branches.len() == 1 {
            branches.pop().unwrap()
        } else {
            Regex::Union(branches)
        })
    }

    fn concat(&mut self) -> Result<Regex<GSym>, GrammarError> {
        let mut parts = Vec::new();
        while let Some(t) = self.peek() {
            if matches!(t, Token::Op('|') | Token::Op(')')) {
                break;
            }
            parts.push(self.postfix()?);
        }
        Ok(match parts.len() {
            0 => Regex::Epsilon,
            1 => parts.pop().unwrap(),
            _ => Regex::Concat(parts),
        })
    }

    fn postfix(&mut self) -> Result<Regex<GSym>, GrammarError> {
        let mut r = self.atom()?;
        while self.peek() == Some(&Token::Op('*')) {
            self.pos += 1;
            r = Regex::Star(Box::new(r));
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Regex<GSym>, GrammarError> {
        let t = self.peek().cloned();
        self.pos += 1;
        match t {
            Some(Token::Sym(s)) => Ok(Regex::Atom(s)),
            Some(Token::Eps) => Ok(Regex::Epsilon),
            Some(Token::Op('(')) => {
                let r = self.union()?;
                if self.peek() != Some(&Token::Op(')')) {
                    return Err(syntax(self.line, "missing `)`"));
                }
                self.pos += 1;
                Ok(r)
            }
            Some(Token::Op(c)) => Err(syntax(self.line, format!("unexpected `{c}`"))),
            None => Err(syntax(self.line, "unexpected end of rule")),
        }
    }
}

fn parse_regex(
    text: &str,
    names: &BTreeSet<String>,
    line: usize,
) -> Result<Regex<GSym>, GrammarError> {
    let tokens = lex(text, names, line)?;
    let mut p = RegexParser {
        tokens: &tokens,
        pos: 0,
        line,
    };
    let r = p.union()?;
    if p.pos != tokens.len() {
        return Err(syntax(line, "unbalanced `)`"));
    }
    Ok(r)
}

/// Parses the grammar format described in the module documentation.
pub fn parse_grammar(text: &str) -> Result<Rstg, GrammarError> {
    let mut alphabet: Option<BTreeSet<char>> = None;
    let mut names = BTreeSet::new();
    let mut start = None;
    let mut bodies = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| syntax(i + 1, format!("expected `key: value`, got `{line}`")))?;
        let rest = rest.trim();
        match key.trim() {
            "alphabet" => {
                let mut set = BTreeSet::new();
                for tok in rest.split_whitespace() {
                    let tok = tok.strip_prefix('\\').unwrap_or(tok);
                    let mut cs = tok.chars();
                    match (cs.next(), cs.next()) {
                        (Some(c), None) => set.insert(c),
                        _ => return Err(syntax(i + 1, format!("`{tok}` is not a single symbol"))),
                    };
                }
                alphabet = Some(set);
            }
            "nonterminals" => names.extend(rest.split_whitespace().map(str::to_string)),
            "start" => {
                start = Some(rest.to_string());
                names.insert(rest.to_string());
            }
            "rule" => {
                let (lhs, rhs) = rest
                    .split_once("->")
                    .ok_or_else(|| syntax(i + 1, "expected `rule: N -> < e >`"))?;
                let lhs = lhs.trim().to_string();
                let body = rhs
                    .trim()
                    .strip_prefix('<')
                    .and_then(|r| r.strip_suffix('>'))
                    .ok_or_else(|| syntax(i + 1, "rule body must be enclosed in `<` `>`"))?;
                names.insert(lhs.clone());
                bodies.push((i + 1, lhs, body.to_string()));
            }
            other => return Err(syntax(i + 1, format!("unknown key `{other}`"))),
        }
    }
    let start = start.ok_or(GrammarError::AxiomMissing)?;
    let mut rules = Vec::new();
    for (line, lhs, body) in bodies {
        rules.push(Rule {
            lhs,
            rhs: parse_regex(&body, &names, line)?,
        });
    }
    let alphabet = match alphabet {
        Some(a) => a,
        None => rules
            .iter()
            .flat_map(|r| r.rhs.atoms())
            .filter_map(|s| match s {
                GSym::T(c) => Some(*c),
                GSym::N(_) => None,
            })
            .collect(),
    };
    Rstg::new(alphabet, names, start, rules)
}

/// Writes `g` in the format read by [`parse_grammar`].
pub fn write_grammar(g: &Rstg) -> String {
    let alphabet: Vec<String> = g
        .alphabet()
        .iter()
        .map(|c| {
            if needs_escape(*c) {
                format!("\\{c}")
            } else {
                c.to_string()
            }
        })
        .collect();
    let names: Vec<&str> = g.nonterminals().iter().map(String::as_str).collect();
    let mut out = format!(
        "alphabet: {}\nnonterminals: {}\nstart: {}\n",
        alphabet.join(" "),
        names.join(" "),
        g.start()
    );
    for r in g.rules() {
        out += &format!("rule: {} -> < {} >\n", r.lhs, r.rhs);
    }
    out
}
