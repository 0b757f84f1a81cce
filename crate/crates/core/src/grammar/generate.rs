use std::collections::{BTreeMap, BTreeSet};

use super::{regex_to_nfa, GSym, Rstg};
use crate::automata::FiniteAutomaton;
use crate::tree::{Item, StringTree};

/// Trees of each size, per nonterminal; index 0 is unused.
type Table = BTreeMap<String, Vec<BTreeSet<StringTree>>>;

/// Every variable-free tree derivable from the axiom with at most
/// `max_nodes` nodes (bracket pairs plus symbols).
pub fn language_up_to(g: &Rstg, max_nodes: usize) -> BTreeSet<StringTree> {
    let table = table(g, max_nodes);
    table
        .get(g.start())
        .map(|by_size| by_size.iter().flatten().cloned().collect())
        .unwrap_or_default()
}

/// Up to `max_count` distinct trees of `L(g)` with at most `max_nodes`
/// nodes, smallest first and, within one size, in serialized order.
pub fn generate(g: &Rstg, max_nodes: usize, max_count: usize) -> Vec<StringTree> {
    let table = table(g, max_nodes);
    let Some(by_size) = table.get(g.start()) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for trees in by_size {
        let mut sized: Vec<(String, &StringTree)> =
            trees.iter().map(|t| (t.serialize(), t)).collect();
        sized.sort();
        for (_, t) in sized {
            if out.len() == max_count {
                return out;
            }
            out.push(t.clone());
        }
    }
    out
}

fn table(g: &Rstg, max_nodes: usize) -> Table {
    let nfas: Vec<(&str, FiniteAutomaton<GSym>)> = g
        .rules()
        .iter()
        .map(|r| (r.lhs.as_str(), regex_to_nfa(&r.rhs)))
        .collect();
    let mut table: Table = g
        .nonterminals()
        .iter()
        .map(|n| (n.clone(), vec![BTreeSet::new(); max_nodes + 1]))
        .collect();
    for size in 1..=max_nodes {
        for (lhs, fa) in &nfas {
            let mut words = Vec::new();
            fill(
                fa,
                &table,
                fa.initial,
                size - 1,
                &mut Vec::new(),
                &mut words,
            );
            let slot = &mut table.get_mut(*lhs).unwrap()[size];
            slot.extend(words.into_iter().map(StringTree::from_items));
        }
    }
    table
}

/// Item sequences of total size exactly `budget` read by `fa` from `q` to
/// a final state, using only trees already in `table`.
fn fill(
    fa: &FiniteAutomaton<GSym>,
    table: &Table,
    q: usize,
    budget: usize,
    prefix: &mut Vec<Item>,
    out: &mut Vec<Vec<Item>>,
) {
    if budget == 0 && fa.finals.contains(&q) {
        out.push(prefix.clone());
    }
    if budget == 0 {
        return;
    }
    for (from, letter, to) in fa.transitions() {
        if from != q {
            continue;
        }
        match letter {
            GSym::T(c) => {
                prefix.push(Item::Symbol(*c));
                fill(fa, table, to, budget - 1, prefix, out);
                prefix.pop();
            }
            GSym::N(n) => {
                for k in 1..=budget {
                    for t in &table[n][k] {
                        prefix.push(Item::Child(t.clone()));
                        fill(fa, table, to, budget - k, prefix, out);
                        prefix.pop();
                    }
                }
            }
        }
    }
}
