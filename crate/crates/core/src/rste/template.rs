//! Action templates.
//!
//! A template is tree-literal text with group references `\0` to `\9`.
//! Whitespace is symbol content. At the top level the pieces are joined by
//! horizontal concatenation: a bracketed literal is that tree, a bare symbol
//! `c` is `<c>` and a reference is its fragments concatenated in order.
//! Inside brackets a reference inserts each fragment as a child node.
//! `\<`, `\>`, `\/` and `\\` escape literal symbols.

use super::{Bindings, RsteError};
use crate::tree::{Item, StringTree, Symbol};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece {
    Symbol(Symbol),
    Group(usize),
    Node(Vec<Piece>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub pieces: Vec<Piece>,
}

impl Template {
    /// The highest group referenced, if any.
    pub fn max_group(&self) -> Option<usize> {
        fn walk(ps: &[Piece]) -> Option<usize> {
            ps.iter()
                .filter_map(|p| match p {
                    Piece::Symbol(_) => None,
                    Piece::Group(g) => Some(*g),
                    Piece::Node(inner) => walk(inner),
                })
                .max()
        }
        walk(&self.pieces)
    }
}

pub fn parse_template(text: &str) -> Result<Template, RsteError> {
    let mut stack: Vec<Vec<Piece>> = vec![Vec::new()];
    let mut chars = text.chars().enumerate();
    let syntax = |offset, message: &str| RsteError::Syntax {
        offset,
        message: message.into(),
    };
    while let Some((offset, c)) = chars.next() {
        let piece = match c {
            '<' => {
                stack.push(Vec::new());
                continue;
            }
            '>' => {
                if stack.len() == 1 {
                    return Err(syntax(offset, "unbalanced `>`"));
                }
                Piece::Node(stack.pop().expect("checked above"))
            }
            '\\' => match chars.next() {
                Some((_, d @ '0'..='9')) => Piece::Group(d as usize - '0' as usize),
                Some((_, e @ ('<' | '>' | '/' | '\\'))) => Piece::Symbol(e),
                _ => return Err(syntax(offset, "bad escape")),
            },
            '/' => return Err(syntax(offset, "reserved character `/`")),
            other => Piece::Symbol(other),
        };
        stack.last_mut().expect("stack never empty").push(piece);
    }
    if stack.len() != 1 {
        return Err(syntax(text.chars().count(), "unclosed `<`"));
    }
    Ok(Template {
        pieces: stack.pop().expect("one level left"),
    })
}

fn lookup(b: &Bindings, g: usize) -> Result<super::Binding, RsteError> {
    b.get(g).ok_or(RsteError::UnboundGroup(g))
}

fn node_items(pieces: &[Piece], b: &Bindings) -> Result<Vec<Item>, RsteError> {
    let mut items = Vec::new();
    for p in pieces {
        match p {
            Piece::Symbol(c) => items.push(Item::Symbol(*c)),
            Piece::Group(g) => {
                items.extend(lookup(b, *g)?.fragments().iter().cloned().map(Item::Child))
            }
            Piece::Node(inner) => {
                items.push(Item::Child(StringTree::from_items(node_items(inner, b)?)))
            }
        }
    }
    Ok(items)
}

/// Builds the tree described by `tpl` from the captured fragments.
pub fn substitute(tpl: &Template, b: &Bindings) -> Result<StringTree, RsteError> {
    let mut out = StringTree::null();
    for p in &tpl.pieces {
        let part = match p {
            Piece::Symbol(c) => StringTree::from_items(vec![Item::Symbol(*c)]),
            Piece::Group(g) => lookup(b, *g)?.concatenated(),
            Piece::Node(inner) => StringTree::from_items(node_items(inner, b)?),
        };
        out = out.concat(&part);
    }
    Ok(out)
}
