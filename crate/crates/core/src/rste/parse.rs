use std::collections::BTreeSet;

use super::{Pattern, Rste, RsteError};
use crate::tree::Symbol;

/// Parses an expression, with an optional leading `vars: X Y` line.
pub fn parse_rste(text: &str) -> Result<Pattern, RsteError> {
    parse_rste_with(text, &BTreeSet::new())
}

/// Like [`parse_rste`], with extra declared variables.
pub fn parse_rste_with(text: &str, vars: &BTreeSet<Symbol>) -> Result<Pattern, RsteError> {
    let mut vars = vars.clone();
    let mut body = text;
    let mut offset = 0;
    let trimmed = text.trim_start();
    if let Some(rest) = trimmed.strip_prefix("vars:") {
        let (header, tail) = rest.split_once('\n').unwrap_or((rest, ""));
        for tok in header.split_whitespace() {
            let mut cs = tok.chars();
            match (cs.next(), cs.next()) {
                (Some(c), None) => vars.insert(c),
                _ => {
                    return Err(RsteError::Syntax {
                        offset: 0,
                        message: format!("variable `{tok}` is not a single symbol"),
                    })
                }
            };
        }
        offset = text[..text.len() - tail.len()].chars().count();
        body = tail;
    }
    let mut p = Parser {
        chars: body.chars().collect(),
        pos: 0,
        base: offset,
        vars: &vars,
        groups: 0,
    };
    let expr = p.union()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected `{}`", p.chars[p.pos])));
    }
    let groups = p.groups;
    Ok(Pattern::new(expr, vars, groups))
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    base: usize,
    vars: &'a BTreeSet<Symbol>,
    groups: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> RsteError {
        RsteError::Syntax {
            offset: self.base + self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn starts_with(&mut self, s: &str) -> bool {
        self.skip_ws();
        s.chars()
            .enumerate()
            .all(|(i, c)| self.chars.get(self.pos + i) == Some(&c))
    }

    fn expect(&mut self, c: char) -> Result<(), RsteError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    /// `{X}` after a vertical operator.
    fn variable(&mut self) -> Result<Symbol, RsteError> {
        self.expect('{')?;
        let x = match self.chars.get(self.pos) {
            Some('\\') => {
                self.pos += 1;
                self.chars.get(self.pos).copied()
            }
            other => other.copied(),
        }
        .ok_or_else(|| self.error("missing variable"))?;
        self.pos += 1;
        self.expect('}')?;
        if self.vars.contains(&x) {
            Ok(x)
        } else {
            Err(RsteError::UndeclaredVariable(x))
        }
    }

    fn union(&mut self) -> Result<Rste, RsteError> {
        let mut acc = self.sequence()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            let rhs = self.sequence()?;
            acc = Rste::Union(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn at_sequence_end(&mut self) -> bool {
        matches!(self.peek(), None | Some('|') | Some(')') | Some('>'))
    }

    fn sequence(&mut self) -> Result<Rste, RsteError> {
        if self.at_sequence_end() {
            return Ok(Rste::Null);
        }
        let mut acc = self.postfix()?;
        while !self.at_sequence_end() {
            if self.starts_with(".{") {
                self.pos += 1;
                let x = self.variable()?;
                let rhs = self.postfix()?;
                acc = Rste::VConcat(Box::new(acc), x, Box::new(rhs));
            } else {
                let rhs = self.postfix()?;
                acc = Rste::HConcat(Box::new(acc), Box::new(rhs));
            }
        }
        Ok(acc)
    }

    fn postfix(&mut self) -> Result<Rste, RsteError> {
        let mut r = self.atom()?;
        loop {
            if self.starts_with("*{") {
                self.pos += 1;
                let x = self.variable()?;
                r = Rste::VStar(Box::new(r), x);
            } else if self.peek() == Some('*') {
                self.pos += 1;
                r = Rste::HStar(Box::new(r));
            } else {
                return Ok(r);
            }
        }
    }

    fn atom(&mut self) -> Result<Rste, RsteError> {
        let c = self
            .peek()
            .ok_or_else(|| self.error("unexpected end of expression"))?;
        self.pos += 1;
        match c {
            '<' => {
                let inner = self.union()?;
                self.expect('>')?;
                Ok(Rste::Encaps(Box::new(inner)))
            }
            '(' => {
                let capture = !self.starts_with("?:");
                if capture {
                    self.groups += 1;
                } else {
                    self.pos += 2;
                }
                let index = self.groups;
                let inner = self.union()?;
                self.expect(')')?;
                Ok(if capture {
                    Rste::Capture(index, Box::new(inner))
                } else {
                    inner
                })
            }
            '%' => Ok(Rste::AnySymbol),
            '@' => Ok(Rste::AnyTree),
            '\\' => {
                let e = self
                    .chars
                    .get(self.pos)
                    .copied()
                    .ok_or_else(|| self.error("dangling `\\`"))?;
                self.pos += 1;
                Ok(self.symbol(e))
            }
            '*' | '|' | ')' | '>' => {
                self.pos -= 1;
                Err(self.error(format!("unexpected `{c}`")))
            }
            other => Ok(self.symbol(other)),
        }
    }

    fn symbol(&self, c: Symbol) -> Rste {
        if self.vars.contains(&c) {
            Rste::Var(c)
        } else {
            Rste::Symbol(c)
        }
    }
}
