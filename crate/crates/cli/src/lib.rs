//! Rule programs: sequences of match-and-rewrite rules over named tree
//! variables.
//!
//! ```text
//! # select the middle subtree
//! expr-vars: X Z
//! rule: out <- match (?:%|X|Z)**{Z} .{X} (@ <left <@>*> <(@)> <right <@>*> @) in in then \2
//! ```
//!
//! `vars:` declares extra tree variables; `in` and `out` always exist.
//! `expr-vars:` declares the expression variables shared by every condition.
//! The template is the rest of the line after `then `, taken verbatim.

use std::collections::{BTreeMap, BTreeSet};

use stree_core::automata::AutomatonError;
use stree_core::grammar::GrammarError;
use stree_core::rste::{parse_rste_with, parse_template, substitute, Pattern, RsteError, Template};
use stree_core::{StringTree, Symbol, TreeError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Tree(#[from] TreeError),
    #[error("{0}")]
    Automaton(#[from] AutomatonError),
    #[error("{0}")]
    Grammar(#[from] GrammarError),
    #[error("{0}")]
    Rste(#[from] RsteError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("rule file line {line}: {message}")]
    Program { line: usize, message: String },
    #[error("rule {rule}: {source}")]
    Runtime { rule: usize, source: RsteError },
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone)]
pub struct ProgramRule {
    pub line: usize,
    pub target: String,
    pub source: String,
    pub condition: Pattern,
    pub action: Template,
}

#[derive(Debug, Clone)]
pub struct RuleProgram {
    pub variables: BTreeSet<String>,
    pub rules: Vec<ProgramRule>,
}

fn program_err(line: usize, message: impl Into<String>) -> CliError {
    CliError::Program {
        line,
        message: message.into(),
    }
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_')
}

/// Splits `cond in src then template` at the first ` in NAME then ` whose
/// name is a declared variable.
fn split_rule_body<'a>(
    body: &'a str,
    variables: &BTreeSet<String>,
) -> Option<(&'a str, &'a str, &'a str)> {
    let mut from = 0;
    while let Some(rel) = body[from..].find(" in ") {
        let at = from + rel;
        let after = &body[at + 4..];
        if let Some((name, template)) = after.split_once(" then ") {
            let name = name.trim();
            if variables.contains(name) {
                return Some((&body[..at], name, template));
            }
        } else if let Some(name) = after.strip_suffix(" then") {
            if variables.contains(name.trim()) {
                return Some((&body[..at], name.trim(), ""));
            }
        }
        from = at + 1;
    }
    None
}

pub fn parse_program(text: &str) -> Result<RuleProgram, CliError> {
    let mut variables: BTreeSet<String> = ["in", "out"].map(String::from).into();
    let mut expr_vars: BTreeSet<Symbol> = BTreeSet::new();
    let mut rule_lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("vars:") {
            for name in rest.split_whitespace() {
                if !is_identifier(name) {
                    return Err(program_err(line, format!("bad variable name `{name}`")));
                }
                variables.insert(name.to_string());
            }
        } else if let Some(rest) = trimmed.strip_prefix("expr-vars:") {
            for tok in rest.split_whitespace() {
                let mut cs = tok.chars();
                match (cs.next(), cs.next()) {
                    (Some(c), None) => expr_vars.insert(c),
                    _ => return Err(program_err(line, format!("`{tok}` is not a single symbol"))),
                };
            }
        } else if let Some(rest) = trimmed.strip_prefix("rule:") {
            rule_lines.push((line, rest));
        } else {
            return Err(program_err(line, "expected `vars:`, `expr-vars:` or `rule:`"));
        }
    }

    let mut rules = Vec::new();
    for (line, rest) in rule_lines {
        let (target, body) = rest
            .split_once("<-")
            .ok_or_else(|| program_err(line, "expected `<target> <- match ...`"))?;
        let target = target.trim();
        if !variables.contains(target) {
            return Err(program_err(line, format!("undeclared variable `{target}`")));
        }
        let body = body
            .trim_start()
            .strip_prefix("match ")
            .ok_or_else(|| program_err(line, "expected `match` after `<-`"))?;
        let (condition, source, template) = split_rule_body(body, &variables)
            .ok_or_else(|| program_err(line, "expected `... in <variable> then <template>`"))?;
        let condition = parse_rste_with(condition, &expr_vars)
            .map_err(|e| program_err(line, format!("condition: {e}")))?;
        let action =
            parse_template(template).map_err(|e| program_err(line, format!("template: {e}")))?;
        if let Some(g) = action.max_group().filter(|g| *g > condition.groups()) {
            return Err(program_err(
                line,
                format!("template refers to group {g}, condition has {}", condition.groups()),
            ));
        }
        rules.push(ProgramRule {
            line,
            target: target.to_string(),
            source: source.to_string(),
            condition,
            action,
        });
    }
    Ok(RuleProgram { variables, rules })
}

/// Runs every rule once, top to bottom, starting with `in` bound to
/// `input` and every other variable empty. Returns the final `out`.
pub fn run_program(p: &RuleProgram, input: &StringTree) -> Result<StringTree, CliError> {
    let mut env: BTreeMap<&str, StringTree> = p
        .variables
        .iter()
        .map(|v| (v.as_str(), StringTree::null()))
        .collect();
    env.insert("in", input.clone());
    for rule in &p.rules {
        let runtime = |source| CliError::Runtime {
            rule: rule.line,
            source,
        };
        let tree = &env[rule.source.as_str()];
        if let Some(b) = rule.condition.match_tree(tree).map_err(runtime)? {
            let value = substitute(&rule.action, &b).map_err(runtime)?;
            env.insert(rule.target.as_str(), value);
        }
    }
    Ok(env.remove("out").expect("`out` is always declared"))
}
