//! Regular string-tree grammars.
//!
//! Every rule has the shape `N -> <e>` where `e` is a string regular
//! expression over terminal symbols and nonterminals. A derivation step
//! replaces one nonterminal occurrence by a node whose item sequence is a
//! word of `e`.

mod convert;
mod eliminate;
mod generate;
mod glushkov;
mod parse;
mod regex;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::tree::Symbol;

pub use convert::{automaton_to_grammar, grammar_to_automaton};
pub use eliminate::nfa_to_regex;
pub use generate::{generate, language_up_to};
pub use glushkov::regex_to_nfa;
pub use parse::{parse_grammar, write_grammar};
pub use regex::Regex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("unknown nonterminal `{0}`")]
    UnknownNonterminal(String),
    #[error("missing `start:` line")]
    AxiomMissing,
    #[error("symbol {0:?} is not in the declared alphabet")]
    UnknownSymbol(Symbol),
    #[error("nonterminal `{0}` is also an alphabet symbol")]
    NonterminalInAlphabet(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// A letter of a right-hand side: a terminal symbol or a nonterminal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GSym {
    T(Symbol),
    N(String),
}

/// Characters that must be escaped when written as terminals.
pub(crate) fn needs_escape(c: char) -> bool {
    "()|*<>\\#".contains(c) || c.is_whitespace() || c.is_ascii_uppercase()
}

impl fmt::Display for GSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GSym::T(c) if needs_escape(*c) => write!(f, "\\{c}"),
            GSym::T(c) => write!(f, "{c}"),
            GSym::N(n) => f.write_str(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: String,
    pub rhs: Regex<GSym>,
}

/// A regular string-tree grammar `(Σ, N, S, R)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rstg {
    alphabet: BTreeSet<Symbol>,
    nonterminals: BTreeSet<String>,
    start: String,
    rules: Vec<Rule>,
}

impl Rstg {
    /// Checks that `N` and `Σ` are disjoint, that the axiom and every rule
    /// side are declared, and that every terminal is in the alphabet.
    pub fn new(
        alphabet: BTreeSet<Symbol>,
        nonterminals: BTreeSet<String>,
        start: String,
        rules: Vec<Rule>,
    ) -> Result<Rstg, GrammarError> {
        if let Some(n) = nonterminals.iter().find(|n| {
            let mut cs = n.chars();
            matches!((cs.next(), cs.next()), (Some(c), None) if alphabet.contains(&c))
        }) {
            return Err(GrammarError::NonterminalInAlphabet(n.clone()));
        }
        if !nonterminals.contains(&start) {
            return Err(GrammarError::UnknownNonterminal(start));
        }
        for r in &rules {
            if !nonterminals.contains(&r.lhs) {
                return Err(GrammarError::UnknownNonterminal(r.lhs.clone()));
            }
            for atom in r.rhs.atoms() {
                match atom {
                    GSym::T(c) if !alphabet.contains(c) => {
                        return Err(GrammarError::UnknownSymbol(*c))
                    }
                    GSym::N(n) if !nonterminals.contains(n) => {
                        return Err(GrammarError::UnknownNonterminal(n.clone()))
                    }
                    _ => {}
                }
            }
        }
        Ok(Rstg {
            alphabet,
            nonterminals,
            start,
            rules,
        })
    }

    pub fn alphabet(&self) -> &BTreeSet<Symbol> {
        &self.alphabet
    }

    pub fn nonterminals(&self) -> &BTreeSet<String> {
        &self.nonterminals
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let s = || "S".to_string();
        let rule = |rhs| Rule { lhs: s(), rhs };
        let ok = Rstg::new(
            BTreeSet::from(['a']),
            BTreeSet::from([s()]),
            s(),
            vec![rule(Regex::atom(GSym::N(s())))],
        );
        assert!(ok.is_ok());
        assert_eq!(
            Rstg::new(
                BTreeSet::from(['a']),
                BTreeSet::from([s()]),
                s(),
                vec![rule(Regex::atom(GSym::T('b')))]
            ),
            Err(GrammarError::UnknownSymbol('b'))
        );
        assert_eq!(
            Rstg::new(
                BTreeSet::from(['a']),
                BTreeSet::from(["a".into(), s()]),
                s(),
                vec![]
            ),
            Err(GrammarError::NonterminalInAlphabet("a".into()))
        );
        assert_eq!(
            Rstg::new(BTreeSet::new(), BTreeSet::new(), s(), vec![]),
            Err(GrammarError::UnknownNonterminal("S".into()))
        );
    }
}
