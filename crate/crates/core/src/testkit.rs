//! Random generators and independent oracles for tests.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::automata::{Flavour, Fsta, Ncfta, NcftaRule};
use crate::grammar::{GSym, Regex, Rstg, Rule};
use crate::term::{RankedTerm, Signature};
use crate::tree::{Item, StringTree, Symbol};

/// A random generalised automaton over `{a, b}` with at most four named
/// states, twelve horizontal rules and four vertical rules. Rules may use
/// alphabet symbols as states.
pub fn random_gnfsta(rng: &mut impl Rng) -> Fsta {
    let mut b = Fsta::builder(Flavour::Generalised, ['a', 'b']);
    let named: Vec<_> = (0..rng.gen_range(1..=4))
        .map(|i| b.state(&format!("q{i}")))
        .collect();
    let mut all = named.clone();
    all.push(b.symbol('a').expect("declared"));
    all.push(b.symbol('b').expect("declared"));
    let initials = rng.gen_range(1..=named.len().min(2));
    for q in named.choose_multiple(rng, initials) {
        b.initial(*q);
    }
    for q in &all {
        if rng.gen_bool(0.4) {
            b.final_state(*q);
        }
    }
    for _ in 0..rng.gen_range(0..=12) {
        let (p, x, q) = (
            *all.choose(rng).unwrap(),
            *all.choose(rng).unwrap(),
            *all.choose(rng).unwrap(),
        );
        b.hrule(p, x, q);
    }
    for _ in 0..rng.gen_range(0..=4) {
        b.vrule(*all.choose(rng).unwrap(), *all.choose(rng).unwrap());
    }
    b.build().expect("random automaton is well formed")
}

/// A random tree over `alphabet` with at most `max_size` nodes plus symbols.
pub fn random_tree(rng: &mut impl Rng, alphabet: &[Symbol], max_size: usize) -> StringTree {
    let mut budget = rng.gen_range(1..=max_size.max(1)) - 1;
    random_items(rng, alphabet, &mut budget, 0)
}

fn random_items(
    rng: &mut impl Rng,
    alphabet: &[Symbol],
    budget: &mut usize,
    depth: usize,
) -> StringTree {
    let mut t = StringTree::null();
    while *budget > 0 && rng.gen_bool(0.75) {
        *budget -= 1;
        if alphabet.is_empty() || (depth < 6 && rng.gen_bool(0.4)) {
            t.push_child(random_items(rng, alphabet, budget, depth + 1));
        } else {
            t.push_symbol(*alphabet.choose(rng).unwrap());
        }
    }
    t
}

/// A random regular expression over `atoms` of the given nesting depth.
pub fn random_regex<L: Clone + PartialEq>(
    rng: &mut impl Rng,
    atoms: &[L],
    depth: usize,
) -> Regex<L> {
    if depth == 0 {
        return match rng.gen_range(0..8) {
            0 => Regex::Epsilon,
            _ => Regex::atom(atoms.choose(rng).unwrap().clone()),
        };
    }
    match rng.gen_range(0..4) {
        0 => Regex::concat([
            random_regex(rng, atoms, depth - 1),
            random_regex(rng, atoms, depth - 1),
        ]),
        1 => Regex::union([
            random_regex(rng, atoms, depth - 1),
            random_regex(rng, atoms, depth - 1),
        ]),
        2 => Regex::star(random_regex(rng, atoms, depth - 1)),
        _ => random_regex(rng, atoms, depth - 1),
    }
}

/// Brzozowski derivative of `r` by `a`.
pub fn derivative<L: Clone + PartialEq>(r: &Regex<L>, a: &L) -> Regex<L> {
    match r {
        Regex::Empty | Regex::Epsilon => Regex::Empty,
        Regex::Atom(b) if b == a => Regex::Epsilon,
        Regex::Atom(_) => Regex::Empty,
        Regex::Union(ps) => Regex::union(ps.iter().map(|p| derivative(p, a))),
        Regex::Concat(ps) => {
            let Some((first, rest)) = ps.split_first() else {
                return Regex::Empty;
            };
            let rest = Regex::concat(rest.iter().cloned());
            let head = Regex::concat([derivative(first, a), rest.clone()]);
            if first.nullable() {
                Regex::union([head, derivative(&rest, a)])
            } else {
                head
            }
        }
        Regex::Star(p) => Regex::concat([derivative(p, a), r.clone()]),
    }
}

/// Membership by repeated derivatives.
pub fn regex_matches<L: Clone + PartialEq>(r: &Regex<L>, word: &[L]) -> bool {
    word.iter()
        .fold(r.clone(), |acc, a| derivative(&acc, a))
        .nullable()
}

/// A random bottom-up automaton with at most three symbols of arity at
/// most two and at most six rules. The constant `c` is always present.
pub fn random_ncfta(rng: &mut impl Rng) -> Ncfta {
    let mut signature = Signature::from([("c".to_string(), 0)]);
    for name in ["f", "g"].iter().take(rng.gen_range(0..=2)) {
        signature.insert(name.to_string(), rng.gen_range(0..=2));
    }
    let states: Vec<String> = (0..rng.gen_range(1..=3)).map(|i| format!("q{i}")).collect();
    let symbols: Vec<(&String, &usize)> = signature.iter().collect();
    let mut rules = Vec::new();
    for _ in 0..rng.gen_range(1..=6) {
        let (f, n) = *symbols.choose(rng).unwrap();
        rules.push(NcftaRule {
            symbol: f.clone(),
            args: (0..*n)
                .map(|_| states.choose(rng).unwrap().clone())
                .collect(),
            target: states.choose(rng).unwrap().clone(),
        });
    }
    rules.sort();
    rules.dedup();
    let mut finals: BTreeSet<String> = states
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .cloned()
        .collect();
    if finals.is_empty() {
        finals.insert(states[0].clone());
    }
    let c = Ncfta {
        signature,
        states: states.into_iter().collect(),
        finals,
        rules,
    };
    c.validate().expect("random automaton is well formed");
    c
}

/// Direct bottom-up evaluation of a term, independent of [`Ncfta::evaluate`].
pub fn ncfta_oracle(c: &Ncfta, t: &RankedTerm) -> bool {
    fn reach(c: &Ncfta, t: &RankedTerm) -> BTreeSet<String> {
        let kids: Vec<BTreeSet<String>> = t.children.iter().map(|k| reach(c, k)).collect();
        c.rules
            .iter()
            .filter(|r| r.symbol == t.symbol && r.args.len() == kids.len())
            .filter(|r| r.args.iter().zip(&kids).all(|(a, k)| k.contains(a)))
            .map(|r| r.target.clone())
            .collect()
    }
    reach(c, t).iter().any(|q| c.finals.contains(q))
}

/// A random grammar over `{a, b}` with nonterminals `S`, `A` and `B` and up
/// to five rules.
pub fn random_grammar(rng: &mut impl Rng) -> Rstg {
    let names = ["S", "A", "B"];
    let atoms = vec![
        GSym::T('a'),
        GSym::T('b'),
        GSym::N("S".into()),
        GSym::N("A".into()),
        GSym::N("B".into()),
    ];
    let mut rules = Vec::new();
    for _ in 0..rng.gen_range(1..=5) {
        let lhs = if rules.is_empty() {
            "S"
        } else {
            names.choose(rng).unwrap()
        };
        let depth = rng.gen_range(0..=3);
        rules.push(Rule {
            lhs: lhs.to_string(),
            rhs: random_regex(rng, &atoms, depth),
        });
    }
    Rstg::new(
        ['a', 'b'].into(),
        names.iter().map(|n| n.to_string()).collect(),
        "S".into(),
        rules,
    )
    .expect("random grammar is well formed")
}

/// Random expression text over `{a, b}` using every operator. Variable `X`
/// is declared on the header line.
pub fn random_rste_text(rng: &mut impl Rng, depth: usize) -> String {
    format!("vars: X\n{}", rste_body(rng, depth))
}

fn rste_body(rng: &mut impl Rng, depth: usize) -> String {
    if depth == 0 {
        return ["a", "b", "%", "@", "X", "<>"].choose(rng).unwrap().to_string();
    }
    let mut sub = || rste_body(rng, depth - 1);
    let (x, y) = (sub(), sub());
    match rng.gen_range(0..9) {
        0 => format!("{x} {y}"),
        1 => format!("(?:{x}|{y})"),
        2 => format!("(?:{x})*"),
        3 => format!("<{x}>"),
        4 => format!("({x})"),
        5 => format!("(?:{x}) .{{X}} (?:{y})"),
        6 => format!("(?:{x})*{{X}}"),
        7 => format!("({x}) ({y})"),
        _ => x,
    }
}

/// The trees accepted by the single-letter example automaton: every symbol
/// is the same letter and no node below the root is empty.
pub fn single_letter_oracle(t: &StringTree) -> bool {
    fn nonempty_below(t: &StringTree) -> bool {
        t.children().all(|c| !c.is_null() && nonempty_below(c))
    }
    t.symbols().len() <= 1 && nonempty_below(t)
}

/// Whether every symbol in `t` is the same letter.
pub fn uniform_letters(t: &StringTree) -> bool {
    t.symbols().len() <= 1
}

/// Every node of `t`, including `t` itself.
pub fn nodes(t: &StringTree) -> Vec<&StringTree> {
    let mut out = vec![t];
    for item in t.items() {
        if let Item::Child(c) = item {
            out.extend(nodes(c));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn derivatives_decide_membership() {
        let r = Regex::concat([Regex::star(Regex::atom('a')), Regex::atom('b')]);
        assert!(regex_matches(&r, &['a', 'a', 'b']));
        assert!(regex_matches(&r, &['b']));
        assert!(!regex_matches(&r, &['a']));
        assert!(!regex_matches(&r, &['b', 'a']));
    }

    #[test]
    fn random_trees_respect_the_size_bound() {
        let mut rng = StdRng::seed_from_u64(1);
        for _ in 0..200 {
            assert!(random_tree(&mut rng, &['a', 'b'], 8).size() <= 8);
        }
    }

    #[test]
    fn example_oracle() {
        for (s, ok) in [
            ("<<<a>>a<aa>>", true),
            ("<>", true),
            ("<ab>", false),
            ("<a<>>", false),
        ] {
            assert_eq!(
                single_letter_oracle(&crate::parse_tree(s).unwrap()),
                ok,
                "{s}"
            );
        }
    }
}
