//! Ranked terms (`+(1,+(1,2))`) and their embedding into string trees.

use std::collections::BTreeMap;
use std::fmt;

use crate::tree::{Item, StringTree, TreeError};

/// Symbol name to arity.
pub type Signature = BTreeMap<String, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankedTerm {
    pub symbol: String,
    pub children: Vec<RankedTerm>,
}

impl RankedTerm {
    pub fn constant(symbol: impl Into<String>) -> Self {
        Self {
            symbol: symbol.into(),
            children: Vec::new(),
        }
    }

    pub fn apply(symbol: impl Into<String>, children: Vec<RankedTerm>) -> Self {
        Self {
            symbol: symbol.into(),
            children,
        }
    }

    pub fn height(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(RankedTerm::height)
            .max()
            .unwrap_or(0)
    }

    /// Checks every node against `signature`.
    pub fn check(&self, signature: &Signature) -> Result<(), TreeError> {
        let expected = signature.get(&self.symbol).copied().unwrap_or(0);
        if expected != self.children.len() || !signature.contains_key(&self.symbol) {
            return Err(TreeError::ArityMismatch {
                name: self.symbol.clone(),
                expected,
                found: self.children.len(),
            });
        }
        self.children.iter().try_for_each(|c| c.check(signature))
    }

    /// All terms of height at most `max_height` over `signature`.
    pub fn enumerate(signature: &Signature, max_height: usize) -> Vec<RankedTerm> {
        let mut terms: Vec<RankedTerm> = Vec::new();
        for _ in 0..max_height {
            let previous = terms.clone();
            let mut next = Vec::new();
            for (name, &arity) in signature {
                let mut tuples: Vec<Vec<RankedTerm>> = vec![Vec::new()];
                for _ in 0..arity {
                    tuples = tuples
                        .into_iter()
                        .flat_map(|prefix| {
                            previous.iter().map(move |t| {
                                let mut p = prefix.clone();
                                p.push(t.clone());
                                p
                            })
                        })
                        .collect();
                }
                next.extend(
                    tuples
                        .into_iter()
                        .map(|c| RankedTerm::apply(name.clone(), c)),
                );
            }
            terms = next;
        }
        terms
    }
}

impl fmt::Display for RankedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbol)?;
        if !self.children.is_empty() {
            f.write_str("(")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                c.fmt(f)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// `τ(f(t1,…,tp)) = <f τ(t1) ⋯ τ(tp)>`; a constant `c` maps to `<c>`.
pub fn term_encode(term: &RankedTerm) -> StringTree {
    let mut items: Vec<Item> = term.symbol.chars().map(Item::Symbol).collect();
    items.extend(term.children.iter().map(|c| Item::Child(term_encode(c))));
    StringTree::from_items(items)
}

/// Parses a term document: optional `arity NAME N` lines, then one term.
/// Without arity lines the signature is inferred from the term itself and
/// must be used consistently.
pub fn parse_term_document(text: &str) -> Result<(Signature, RankedTerm), TreeError> {
    let mut signature = Signature::new();
    let mut declared = false;
    let mut body = String::new();
    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("arity ") {
            let mut parts = rest.split_whitespace();
            let (Some(name), Some(n), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(TreeError::TermSyntax {
                    offset: 0,
                    message: format!("malformed arity line `{trimmed}`"),
                });
            };
            let n = n.parse::<usize>().map_err(|_| TreeError::TermSyntax {
                offset: 0,
                message: format!("bad arity `{n}`"),
            })?;
            signature.insert(name.to_string(), n);
            declared = true;
        } else {
            body.push_str(trimmed);
        }
    }
    let term = parse_term(&body)?;
    if declared {
        term.check(&signature)?;
    } else {
        infer_signature(&term, &mut signature)?;
    }
    Ok((signature, term))
}

fn infer_signature(term: &RankedTerm, signature: &mut Signature) -> Result<(), TreeError> {
    let found = term.children.len();
    match signature.get(&term.symbol) {
        Some(&expected) if expected != found => {
            return Err(TreeError::ArityMismatch {
                name: term.symbol.clone(),
                expected,
                found,
            })
        }
        Some(_) => {}
        None => {
            signature.insert(term.symbol.clone(), found);
        }
    }
    term.children
        .iter()
        .try_for_each(|c| infer_signature(c, signature))
}

/// Parses `term := name '(' term (',' term)* ')' | name`; whitespace is
/// ignored between tokens.
pub fn parse_term(text: &str) -> Result<RankedTerm, TreeError> {
    let chars: Vec<(usize, char)> = text
        .char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .collect();
    let mut pos = 0;
    let term = parse_term_at(&chars, &mut pos, text.len())?;
    if pos != chars.len() {
        return Err(TreeError::TermSyntax {
            offset: chars[pos].0,
            message: "trailing input".into(),
        });
    }
    Ok(term)
}

fn parse_term_at(
    chars: &[(usize, char)],
    pos: &mut usize,
    end: usize,
) -> Result<RankedTerm, TreeError> {
    let offset = |p: usize| chars.get(p).map_or(end, |(o, _)| *o);
    let start = *pos;
    while let Some(&(_, c)) = chars.get(*pos) {
        if matches!(c, '(' | ')' | ',') {
            break;
        }
        *pos += 1;
    }
    if *pos == start {
        return Err(TreeError::TermSyntax {
            offset: offset(start),
            message: "expected a symbol name".into(),
        });
    }
    let name: String = chars[start..*pos].iter().map(|(_, c)| *c).collect();
    let mut children = Vec::new();
    if chars.get(*pos).map(|(_, c)| *c) == Some('(') {
        *pos += 1;
        loop {
            children.push(parse_term_at(chars, pos, end)?);
            match chars.get(*pos).map(|(_, c)| *c) {
                Some(',') => *pos += 1,
                Some(')') => {
                    *pos += 1;
                    break;
                }
                _ => {
                    return Err(TreeError::TermSyntax {
                        offset: offset(*pos),
                        message: "expected `,` or `)`".into(),
                    })
                }
            }
        }
    }
    Ok(RankedTerm::apply(name, children))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::parse_tree;

    #[test]
    fn encodes_worked_example() {
        let term = parse_term("+(1,+(1,2))").unwrap();
        assert_eq!(term_encode(&term), parse_tree("<+<1><+<1><2>>>").unwrap());
    }

    #[test]
    fn constant_encodes_as_single_symbol_tree() {
        assert_eq!(
            term_encode(&RankedTerm::constant("c")),
            parse_tree("<c>").unwrap()
        );
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let doc = "arity f 2\narity 1 0\nf(1)";
        assert!(matches!(
            parse_term_document(doc),
            Err(TreeError::ArityMismatch {
                expected: 2,
                found: 1,
                ..
            })
        ));
        assert!(matches!(
            parse_term_document("f(f(1,1))"),
            Err(TreeError::ArityMismatch { .. })
        ));
        assert!(parse_term_document("arity f 2\narity 1 0\nf(1,1)").is_ok());
    }

    #[test]
    fn term_syntax_errors() {
        assert!(parse_term("f(1,").is_err());
        assert!(parse_term("f(1)x").is_err());
        assert!(parse_term("").is_err());
        assert_eq!(parse_term("f ( a , b )").unwrap().to_string(), "f(a,b)");
    }

    #[test]
    fn enumerates_by_height() {
        let sig: Signature = [("+".to_string(), 2), ("1".to_string(), 0)].into();
        let terms = RankedTerm::enumerate(&sig, 2);
        // height 1: `1`; height ≤ 2 adds `+(1,1)`
        assert_eq!(terms.len(), 2);
        let terms3 = RankedTerm::enumerate(&sig, 3);
        assert_eq!(terms3.len(), 1 + 2 * 2);
    }
}
