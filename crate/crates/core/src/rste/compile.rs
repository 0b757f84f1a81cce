//! Compilation of expressions to nonterminal bodies.
//!
//! Every expression describes the item sequence of one node. Each
//! encapsulation and each vertical operator introduces a nonterminal whose
//! body describes the item sequence of a child node. Variables are resolved
//! through an environment mapping each bound variable to the nonterminal
//! that replaces it, so every occurrence expands independently.

use std::collections::{BTreeMap, BTreeSet};

use super::{Pattern, Rste, RsteError};
use crate::grammar::{GSym, Regex, Rstg, Rule};
use crate::tree::Symbol;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Node {
    /// Matches nothing.
    Fail,
    Eps,
    Sym(Symbol),
    AnySym,
    /// A child node matching the given nonterminal.
    Child(usize),
    Cat(Vec<Node>),
    Alt(Vec<Node>),
    Star(Box<Node>),
    Group(usize, Box<Node>),
}

#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    pub root: Node,
    pub nonterminals: Vec<Node>,
    /// Per group (index 0 unused): true if the group sits inside an
    /// iteration and therefore binds a sequence.
    pub many: Vec<bool>,
}

struct Compiler {
    nonterminals: Vec<Node>,
    many: Vec<bool>,
}

pub(crate) fn compile(expr: &Rste, vars: &BTreeSet<Symbol>) -> Compiled {
    let expr = expr.desugar(vars);
    let mut c = Compiler {
        nonterminals: Vec::new(),
        many: vec![false],
    };
    let root = c.node(&expr, &BTreeMap::new(), false);
    Compiled {
        root,
        nonterminals: c.nonterminals,
        many: c.many,
    }
}

impl Compiler {
    fn fresh(&mut self) -> usize {
        self.nonterminals.push(Node::Fail);
        self.nonterminals.len() - 1
    }

    fn node(&mut self, r: &Rste, env: &BTreeMap<Symbol, usize>, in_star: bool) -> Node {
        match r {
            Rste::Null => Node::Eps,
            Rste::Symbol(c) => Node::Sym(*c),
            // an unbound variable never occurs in a variable-free tree
            Rste::Var(x) => env.get(x).map_or(Node::Fail, |n| Node::Child(*n)),
            Rste::AnySymbol => Node::AnySym,
            Rste::AnyTree => unreachable!("desugared before compilation"),
            Rste::Union(a, b) => {
                Node::Alt(vec![self.node(a, env, in_star), self.node(b, env, in_star)])
            }
            Rste::HConcat(a, b) => {
                Node::Cat(vec![self.node(a, env, in_star), self.node(b, env, in_star)])
            }
            Rste::HStar(a) => Node::Star(Box::new(self.node(a, env, true))),
            Rste::Encaps(a) => {
                let n = self.fresh();
                self.nonterminals[n] = self.node(a, env, in_star);
                Node::Child(n)
            }
            Rste::VConcat(a, x, b) => {
                let n = self.fresh();
                self.nonterminals[n] = self.node(b, env, in_star);
                let mut inner = env.clone();
                inner.insert(*x, n);
                self.node(a, &inner, in_star)
            }
            Rste::VStar(a, x) => {
                let n = self.fresh();
                let mut inner = env.clone();
                inner.insert(*x, n);
                let body = self.node(a, &inner, true);
                self.nonterminals[n] = body.clone();
                body
            }
            Rste::Capture(g, a) => {
                if self.many.len() <= *g {
                    self.many.resize(g + 1, false);
                }
                self.many[*g] = in_star;
                Node::Group(*g, Box::new(self.node(a, env, in_star)))
            }
        }
    }
}

fn to_regex(n: &Node, alphabet: &BTreeSet<Symbol>, names: &[String]) -> Regex<GSym> {
    match n {
        Node::Fail => Regex::Empty,
        Node::Eps => Regex::Epsilon,
        Node::Sym(c) if alphabet.contains(c) => Regex::atom(GSym::T(*c)),
        Node::Sym(_) => Regex::Empty,
        Node::AnySym => Regex::union(alphabet.iter().map(|c| Regex::atom(GSym::T(*c)))),
        Node::Child(k) => Regex::atom(GSym::N(names[*k].clone())),
        Node::Cat(ps) => Regex::concat(ps.iter().map(|p| to_regex(p, alphabet, names))),
        Node::Alt(ps) => Regex::union(ps.iter().map(|p| to_regex(p, alphabet, names))),
        Node::Star(p) => Regex::star(to_regex(p, alphabet, names)),
        Node::Group(_, p) => to_regex(p, alphabet, names),
    }
}

/// A grammar generating the variable-free trees over `alphabet` denoted
/// by `pattern`. Nonterminal `N{k}` stands for the `k`-th child position
/// introduced by compilation; `S` is the axiom.
pub fn rste_to_grammar(pattern: &Pattern, alphabet: &BTreeSet<Symbol>) -> Result<Rstg, RsteError> {
    if let Some(v) = pattern.vars().iter().find(|v| alphabet.contains(v)) {
        return Err(RsteError::VariableInAlphabet(*v));
    }
    let c = &pattern.compiled;
    let names: Vec<String> = (0..c.nonterminals.len()).map(|k| format!("N{k}")).collect();
    let mut rules = vec![Rule {
        lhs: "S".into(),
        rhs: to_regex(&c.root, alphabet, &names),
    }];
    for (k, body) in c.nonterminals.iter().enumerate() {
        rules.push(Rule {
            lhs: names[k].clone(),
            rhs: to_regex(body, alphabet, &names),
        });
    }
    rules.retain(|r| r.rhs != Regex::Empty);
    let mut nonterminals: BTreeSet<String> = names.into_iter().collect();
    nonterminals.insert("S".into());
    Ok(Rstg::new(alphabet.clone(), nonterminals, "S".into(), rules)
        .expect("compiled grammar is well formed"))
}
