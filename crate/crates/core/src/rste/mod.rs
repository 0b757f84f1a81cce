//! Regular string-tree expressions.
//!
//! Concrete syntax (the expression denotes the item sequence of the root
//! node):
//!
//! | syntax      | meaning                                             |
//! |-------------|-----------------------------------------------------|
//! | `a`         | the one-symbol tree `<a>`                           |
//! | `r s`       | horizontal concatenation                            |
//! | `r \| s`    | union                                               |
//! | `r*`        | horizontal iteration                                |
//! | `<r>`       | encapsulation: a node whose only child is from `r`  |
//! | `r .{X} s`  | vertical concatenation through variable `X`         |
//! | `r*{X}`     | vertical iteration through variable `X`             |
//! | `%`         | any single non-variable symbol                      |
//! | `@`         | any tree                                            |
//! | `( )`       | capturing group; `(?: )` groups without capturing   |
//! | `\c`        | the literal symbol `c`                              |
//!
//! Unescaped whitespace is ignored. Variables are declared on a leading
//! `vars: X Y` line. Vertical operators substitute each occurrence of the
//! variable independently, so `X X .{X} (?:a|b)` contains `<<a><b>>`.

mod compile;
mod matcher;
mod parse;
mod template;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::grammar::Rstg;
use crate::tree::{StringTree, Symbol};

pub use compile::rste_to_grammar;
pub use parse::{parse_rste, parse_rste_with};
pub use template::{parse_template, substitute, Piece, Template};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RsteError {
    #[error("offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("variable {0:?} is not declared")]
    UndeclaredVariable(Symbol),
    #[error("variable {0:?} is also an alphabet symbol")]
    VariableInAlphabet(Symbol),
    #[error("input tree contains variable {0:?}")]
    VariableInInput(Symbol),
    #[error("group {0} is not bound")]
    UnboundGroup(usize),
}

/// Expression syntax tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rste {
    /// The null tree `<>`, neutral for horizontal concatenation.
    Null,
    Symbol(Symbol),
    /// An occurrence of a declared variable.
    Var(Symbol),
    Union(Box<Rste>, Box<Rste>),
    HConcat(Box<Rste>, Box<Rste>),
    VConcat(Box<Rste>, Symbol, Box<Rste>),
    HStar(Box<Rste>),
    VStar(Box<Rste>, Symbol),
    Encaps(Box<Rste>),
    AnySymbol,
    AnyTree,
    Capture(usize, Box<Rste>),
}

impl Rste {
    /// Replaces every `@` by `(% | Z)**{Z}` for a variable `Z` that occurs
    /// nowhere else, so its scope cannot interfere with user variables.
    pub fn desugar(&self, taken: &BTreeSet<Symbol>) -> Rste {
        let mut used = taken.clone();
        self.collect_symbols(&mut used);
        let fresh = fresh_variable(&used);
        self.expand_any_tree(fresh)
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Rste::Null | Rste::AnySymbol | Rste::AnyTree => {}
            Rste::Symbol(c) | Rste::Var(c) => {
                out.insert(*c);
            }
            Rste::Union(a, b) | Rste::HConcat(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
            Rste::VConcat(a, x, b) => {
                out.insert(*x);
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
            Rste::VStar(r, x) => {
                out.insert(*x);
                r.collect_symbols(out);
            }
            Rste::HStar(r) | Rste::Encaps(r) | Rste::Capture(_, r) => r.collect_symbols(out),
        }
    }

    fn expand_any_tree(&self, z: Symbol) -> Rste {
        let go = |r: &Rste| Box::new(r.expand_any_tree(z));
        match self {
            Rste::AnyTree => Rste::VStar(
                Box::new(Rste::HStar(Box::new(Rste::Union(
                    Box::new(Rste::AnySymbol),
                    Box::new(Rste::Var(z)),
                )))),
                z,
            ),
            Rste::Null | Rste::Symbol(_) | Rste::Var(_) | Rste::AnySymbol => self.clone(),
            Rste::Union(a, b) => Rste::Union(go(a), go(b)),
            Rste::HConcat(a, b) => Rste::HConcat(go(a), go(b)),
            Rste::VConcat(a, x, b) => Rste::VConcat(go(a), *x, go(b)),
            Rste::HStar(r) => Rste::HStar(go(r)),
            Rste::VStar(r, x) => Rste::VStar(go(r), *x),
            Rste::Encaps(r) => Rste::Encaps(go(r)),
            Rste::Capture(g, r) => Rste::Capture(*g, go(r)),
        }
    }
}

/// A private-use character not in `used`.
fn fresh_variable(used: &BTreeSet<Symbol>) -> Symbol {
    ('\u{E000}'..='\u{F8FF}')
        .find(|c| !used.contains(c))
        .expect("private use area exhausted")
}

/// A parsed expression with its declared variables, ready for matching.
#[derive(Debug, Clone)]
pub struct Pattern {
    expr: Rste,
    vars: BTreeSet<Symbol>,
    groups: usize,
    compiled: compile::Compiled,
}

impl Pattern {
    pub fn new(expr: Rste, vars: BTreeSet<Symbol>, groups: usize) -> Pattern {
        let compiled = compile::compile(&expr, &vars);
        Pattern {
            expr,
            vars,
            groups,
            compiled,
        }
    }

    pub fn expr(&self) -> &Rste {
        &self.expr
    }

    pub fn vars(&self) -> &BTreeSet<Symbol> {
        &self.vars
    }

    /// Number of capturing groups.
    pub fn groups(&self) -> usize {
        self.groups
    }

    /// Matches the whole of `t`. Returns the bindings of the preferred
    /// derivation: unions try alternatives left to right and iterations are
    /// greedy.
    pub fn match_tree(&self, t: &StringTree) -> Result<Option<Bindings>, RsteError> {
        if let Some(v) = t.symbols().into_iter().find(|c| self.vars.contains(c)) {
            return Err(RsteError::VariableInInput(v));
        }
        Ok(matcher::run(&self.compiled, t).map(|groups| Bindings {
            whole: t.clone(),
            groups,
        }))
    }

    /// The equivalent grammar over `alphabet`.
    pub fn to_grammar(&self, alphabet: &BTreeSet<Symbol>) -> Result<Rstg, RsteError> {
        rste_to_grammar(self, alphabet)
    }
}

/// What a group captured.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binding {
    One(StringTree),
    /// Every fragment matched by a group inside an iteration, in order.
    Many(Vec<StringTree>),
}

impl Binding {
    /// The fragments joined by horizontal concatenation.
    pub fn concatenated(&self) -> StringTree {
        match self {
            Binding::One(t) => t.clone(),
            Binding::Many(ts) => ts.iter().fold(StringTree::null(), |acc, t| acc.concat(t)),
        }
    }

    pub fn fragments(&self) -> &[StringTree] {
        match self {
            Binding::One(t) => std::slice::from_ref(t),
            Binding::Many(ts) => ts,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bindings {
    /// The matched tree, referenced as group 0 in templates.
    pub whole: StringTree,
    pub groups: BTreeMap<usize, Binding>,
}

impl Bindings {
    pub fn get(&self, group: usize) -> Option<Binding> {
        if group == 0 {
            Some(Binding::One(self.whole.clone()))
        } else {
            self.groups.get(&group).cloned()
        }
    }
}
