//! String trees: nodes holding an ordered mix of label symbols and child
//! trees, written as balanced bracket strings such as `<ab<cde>f<g<hi>>>`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A label symbol. Any scalar value is allowed; `<`, `>`, `/` and `\` are
/// escaped with a backslash in the serialized form.
pub type Symbol = char;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("unbalanced brackets at offset {offset}")]
    UnbalancedBrackets { offset: usize },
    #[error("content outside the root node at offset {offset}")]
    ContentOutsideRoot { offset: usize },
    #[error("bad escape sequence at offset {offset}")]
    BadEscape { offset: usize },
    #[error("reserved character {ch:?} must be escaped (offset {offset})")]
    ReservedCharacter { ch: char, offset: usize },
    #[error("arity mismatch for {name}: expected {expected}, found {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("term syntax error at offset {offset}: {message}")]
    TermSyntax { offset: usize, message: String },
}

/// One entry of a node: a label symbol or a child tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Item {
    Symbol(Symbol),
    Child(StringTree),
}

/// A node of a string tree. The null tree `<>` has no items.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StringTree {
    items: Vec<Item>,
}

impl StringTree {
    /// The null tree `<>`.
    pub fn null() -> Self {
        Self::default()
    }

    pub fn from_items(items: Vec<Item>) -> Self {
        Self { items }
    }

    /// A single-label tree `<s>`.
    pub fn leaf(label: &str) -> Self {
        Self {
            items: label.chars().map(Item::Symbol).collect(),
        }
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn into_items(self) -> Vec<Item> {
        self.items
    }

    pub fn push_symbol(&mut self, symbol: Symbol) {
        self.items.push(Item::Symbol(symbol));
    }

    pub fn push_child(&mut self, child: StringTree) {
        self.items.push(Item::Child(child));
    }

    pub fn is_null(&self) -> bool {
        self.items.is_empty()
    }

    /// The node's label: its symbols in order, ignoring children.
    pub fn label(&self) -> String {
        self.items
            .iter()
            .filter_map(|item| match item {
                Item::Symbol(c) => Some(*c),
                Item::Child(_) => None,
            })
            .collect()
    }

    pub fn children(&self) -> impl Iterator<Item = &StringTree> {
        self.items.iter().filter_map(|item| match item {
            Item::Child(t) => Some(t),
            Item::Symbol(_) => None,
        })
    }

    pub fn is_leaf(&self) -> bool {
        self.children().next().is_none()
    }

    /// Node count where every bracket pair and every symbol counts as one.
    pub fn size(&self) -> usize {
        1 + self
            .items
            .iter()
            .map(|item| match item {
                Item::Symbol(_) => 1,
                Item::Child(t) => t.size(),
            })
            .sum::<usize>()
    }

    /// Number of bracket pairs (labels) in the tree.
    pub fn label_count(&self) -> usize {
        1 + self.children().map(StringTree::label_count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().map(StringTree::depth).max().unwrap_or(0)
    }

    /// Every symbol occurring anywhere in the tree.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        for item in &self.items {
            match item {
                Item::Symbol(c) => {
                    out.insert(*c);
                }
                Item::Child(t) => t.collect_symbols(out),
            }
        }
    }

    /// Horizontal concatenation `u · v`: one node holding u's items then v's.
    pub fn concat(&self, other: &StringTree) -> StringTree {
        let mut items = Vec::with_capacity(self.items.len() + other.items.len());
        items.extend(self.items.iter().cloned());
        items.extend(other.items.iter().cloned());
        StringTree { items }
    }

    /// Encapsulation `<t>`: a node whose only item is `t`.
    pub fn encapsulate(&self) -> StringTree {
        StringTree {
            items: vec![Item::Child(self.clone())],
        }
    }

    /// Normal form under symbol/subtree commutation: in every node all
    /// symbols are moved in front of all children, keeping relative order.
    pub fn reduce(&self) -> StringTree {
        let mut symbols = Vec::new();
        let mut children = Vec::new();
        for item in &self.items {
            match item {
                Item::Symbol(c) => symbols.push(Item::Symbol(*c)),
                Item::Child(t) => children.push(Item::Child(t.reduce())),
            }
        }
        symbols.extend(children);
        StringTree { items: symbols }
    }

    /// True when no node has a symbol after one of its children.
    pub fn is_reduced(&self) -> bool {
        let mut seen_child = false;
        for item in &self.items {
            match item {
                Item::Symbol(_) if seen_child => return false,
                Item::Symbol(_) => {}
                Item::Child(t) => {
                    if !t.is_reduced() {
                        return false;
                    }
                    seen_child = true;
                }
            }
        }
        true
    }

    /// Equality of reduced forms.
    pub fn equals_reduced(&self, other: &StringTree) -> bool {
        self.reduce() == other.reduce()
    }

    /// Vertical concatenation `u ·x v`: every occurrence of symbol `x` in
    /// `self` is replaced by the child tree `v`.
    pub fn vertical_concat(&self, x: Symbol, v: &StringTree) -> StringTree {
        let items = self
            .items
            .iter()
            .map(|item| match item {
                Item::Symbol(c) if *c == x => Item::Child(v.clone()),
                Item::Symbol(c) => Item::Symbol(*c),
                Item::Child(t) => Item::Child(t.vertical_concat(x, v)),
            })
            .collect();
        StringTree { items }
    }

    pub fn serialize(&self) -> String {
        self.to_string()
    }

    /// Parses the bracket syntax; see [`parse_tree`].
    pub fn parse(text: &str) -> Result<StringTree, TreeError> {
        parse_tree(text)
    }

    /// All trees over `alphabet` whose [`size`](Self::size) is at most
    /// `max_size`, ordered by size and then item structure.
    pub fn enumerate(alphabet: &BTreeSet<Symbol>, max_size: usize) -> Vec<StringTree> {
        let mut by_size: Vec<Vec<StringTree>> = vec![Vec::new()];
        let mut seqs: Vec<Vec<Vec<Item>>> = vec![vec![Vec::new()]];
        for total in 1..=max_size {
            // trees of size `total` are item sequences of size `total - 1`
            by_size.push(
                seqs[total - 1]
                    .iter()
                    .map(|items| StringTree::from_items(items.clone()))
                    .collect(),
            );
            let mut next = Vec::new();
            for first in 1..=total {
                let heads: Vec<Item> = if first == 1 {
                    alphabet
                        .iter()
                        .map(|c| Item::Symbol(*c))
                        .chain(by_size[1].iter().cloned().map(Item::Child))
                        .collect()
                } else {
                    by_size[first].iter().cloned().map(Item::Child).collect()
                };
                for head in &heads {
                    for tail in &seqs[total - first] {
                        let mut items = Vec::with_capacity(tail.len() + 1);
                        items.push(head.clone());
                        items.extend(tail.iter().cloned());
                        next.push(items);
                    }
                }
            }
            seqs.push(next);
        }
        by_size.into_iter().flatten().collect()
    }
}

fn write_symbol(f: &mut fmt::Formatter<'_>, c: Symbol) -> fmt::Result {
    if matches!(c, '<' | '>' | '/' | '\\') {
        write!(f, "\\{c}")
    } else {
        write!(f, "{c}")
    }
}

impl fmt::Display for StringTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for item in &self.items {
            match item {
                Item::Symbol(c) => write_symbol(f, *c)?,
                Item::Child(t) => t.fmt(f)?,
            }
        }
        f.write_str(">")
    }
}

impl FromStr for StringTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_tree(s)
    }
}

/// Parses `tree := '<' item* '>'`, `item := tree | char`. Whitespace is
/// symbol content; `\<`, `\>`, `\/` and `\\` are the only escapes.
pub fn parse_tree(text: &str) -> Result<StringTree, TreeError> {
    let mut stack: Vec<StringTree> = Vec::new();
    let mut root: Option<StringTree> = None;
    let mut chars = text.char_indices().peekable();
    while let Some((offset, c)) = chars.next() {
        if root.is_some() {
            return Err(TreeError::ContentOutsideRoot { offset });
        }
        match c {
            '<' => stack.push(StringTree::null()),
            '>' => {
                let done = stack
                    .pop()
                    .ok_or(TreeError::UnbalancedBrackets { offset })?;
                match stack.last_mut() {
                    Some(parent) => parent.push_child(done),
                    None => root = Some(done),
                }
            }
            _ => {
                let node = stack
                    .last_mut()
                    .ok_or(TreeError::ContentOutsideRoot { offset })?;
                let symbol = match c {
                    '\\' => match chars.next() {
                        Some((_, e @ ('<' | '>' | '/' | '\\'))) => e,
                        _ => return Err(TreeError::BadEscape { offset }),
                    },
                    '/' => return Err(TreeError::ReservedCharacter { ch: c, offset }),
                    other => other,
                };
                node.push_symbol(symbol);
            }
        }
    }
    match root {
        Some(tree) if stack.is_empty() => Ok(tree),
        _ => Err(TreeError::UnbalancedBrackets { offset: text.len() }),
    }
}

/// Vertical representation of a string: `ω("") = <>`,
/// `ω(s a) = <ω(s)> · <a>`.
pub fn vertical_encode(s: &str) -> StringTree {
    s.chars().fold(StringTree::null(), |acc, a| {
        StringTree::from_items(vec![Item::Child(acc), Item::Symbol(a)])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> StringTree {
        parse_tree(s).unwrap()
    }

    #[test]
    fn parses_nested_example() {
        let tree = t("<ab<cde>f<g<hi>>>");
        assert_eq!(
            tree.items(),
            &[
                Item::Symbol('a'),
                Item::Symbol('b'),
                Item::Child(StringTree::leaf("cde")),
                Item::Symbol('f'),
                Item::Child(StringTree::from_items(vec![
                    Item::Symbol('g'),
                    Item::Child(StringTree::leaf("hi")),
                ])),
            ]
        );
    }

    #[test]
    fn null_tree_round_trip() {
        assert_eq!(t("<>"), StringTree::null());
        assert_eq!(StringTree::null().serialize(), "<>");
        assert_eq!(t("<>").items().len(), 0);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_tree("<a<b>"),
            Err(TreeError::UnbalancedBrackets { .. })
        ));
        assert!(matches!(
            parse_tree("<a>>"),
            Err(TreeError::ContentOutsideRoot { .. })
        ));
        assert!(matches!(
            parse_tree("x<a>"),
            Err(TreeError::ContentOutsideRoot { .. })
        ));
        assert!(matches!(
            parse_tree("<a>b"),
            Err(TreeError::ContentOutsideRoot { .. })
        ));
        assert!(matches!(
            parse_tree("<a\\q>"),
            Err(TreeError::BadEscape { .. })
        ));
        assert!(matches!(
            parse_tree("<a\\"),
            Err(TreeError::BadEscape { .. })
        ));
        assert!(matches!(
            parse_tree("<a/b>"),
            Err(TreeError::ReservedCharacter { ch: '/', .. })
        ));
        assert!(matches!(
            parse_tree(""),
            Err(TreeError::UnbalancedBrackets { .. })
        ));
    }

    #[test]
    fn nested_name_tree_serializes() {
        let mut name = StringTree::leaf("name");
        let mut first = StringTree::leaf("first");
        first.push_child(StringTree::leaf("Joe"));
        let mut last = StringTree::leaf("last");
        last.push_child(StringTree::leaf("Bloggs"));
        name.push_child(first);
        name.push_child(last);
        assert_eq!(name.serialize(), "<name<first<Joe>><last<Bloggs>>>");
    }

    #[test]
    fn escapes_reserved_characters() {
        let tree = StringTree::leaf("a<b/\\>");
        assert_eq!(tree.serialize(), "<a\\<b\\/\\\\\\>>");
        assert_eq!(t(&tree.serialize()), tree);
    }

    #[test]
    fn whitespace_is_content() {
        assert_eq!(t("< a >").label(), " a ");
    }

    #[test]
    fn concat_examples() {
        assert_eq!(t("<ab>").concat(&t("<cd>")), t("<abcd>"));
        let x = t("<a<b>>");
        assert_eq!(StringTree::null().concat(&x), x);
        assert_eq!(x.concat(&StringTree::null()), x);
        assert_eq!(x.concat(&t("<c>")), t("<a<b>c>"));
    }

    #[test]
    fn encapsulate_examples() {
        assert_eq!(StringTree::null().encapsulate(), t("<<>>"));
        assert_eq!(t("<a>").encapsulate(), t("<<a>>"));
        let a = t("<a>");
        assert_ne!(
            a.concat(&a).encapsulate(),
            a.encapsulate().concat(&a.encapsulate())
        );
    }

    #[test]
    fn reduce_examples() {
        let messy = t("<na<fir<Joe>st>m<<Bloggs>last>e>");
        let clean = t("<name<first<Joe>><last<Bloggs>>>");
        assert_eq!(messy.reduce(), clean);
        assert!(messy.equals_reduced(&clean));
        assert!(clean.is_reduced());
        assert!(!messy.is_reduced());
        assert_eq!(t("<ab>").reduce(), t("<ab>"));
        assert!(!t("<ab>").equals_reduced(&t("<ba>")));
        assert!(messy.equals_reduced(&messy));
    }

    #[test]
    fn vertical_concat_examples() {
        assert_eq!(t("<axb>").vertical_concat('x', &t("<x>")), t("<a<x>b>"));
        assert_eq!(StringTree::null().vertical_concat('x', &t("<a>")), t("<>"));
        assert_eq!(t("<XX>").vertical_concat('X', &t("<c>")), t("<<c><c>>"));
        assert_eq!(t("<x>").vertical_concat('x', &t("<q>")), t("<<q>>"));
        assert_eq!(t("<a>").vertical_concat('x', &t("<q>")), t("<a>"));
    }

    #[test]
    fn vertical_encode_examples() {
        assert_eq!(vertical_encode(""), t("<>"));
        assert_eq!(vertical_encode("ab"), t("<<<>a>b>"));
        assert_eq!(vertical_encode("abc"), t("<<<<>a>b>c>"));
        assert_eq!(vertical_encode("abcd").size(), 9);
    }

    #[test]
    fn enumeration_counts() {
        let ab: BTreeSet<char> = ['a', 'b'].into();
        let trees = StringTree::enumerate(&ab, 6);
        let count = |n: usize| trees.iter().filter(|t| t.size() == n).count();
        // sizes 1..=6: sequences of symbols (weight 1) and children
        assert_eq!(
            (1..=6).map(count).collect::<Vec<_>>(),
            vec![1, 3, 12, 57, 300, 1686]
        );
        let unique: BTreeSet<_> = trees.iter().collect();
        assert_eq!(unique.len(), trees.len());
    }
}
