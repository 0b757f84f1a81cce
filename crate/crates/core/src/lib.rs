//! String trees and their regular languages.
//!
//! A string tree is a bracketed string such as `<ab<c>d>`: each node holds
//! an interleaved sequence of label symbols and child nodes. The crate
//! provides the tree algebra, string-tree automata, regular string-tree
//! grammars, and regular string-tree expressions with capture groups.

pub mod automata;
pub mod grammar;
pub mod rste;
pub mod term;
pub mod tree;

pub use tree::{parse_tree, vertical_encode, Item, StringTree, Symbol, TreeError};

#[cfg(feature = "testkit")]
pub mod testkit;
