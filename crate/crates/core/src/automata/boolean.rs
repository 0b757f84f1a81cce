use std::collections::{BTreeMap, BTreeSet};

use super::{
    complete, determinize, to_pure_states, AutomatonError, Flavour, Fsta, FstaBuilder, StateId,
};

fn same_alphabet(a1: &Fsta, a2: &Fsta) -> Result<(), AutomatonError> {
    if a1.alphabet() == a2.alphabet() {
        Ok(())
    } else {
        Err(AutomatonError::AlphabetsDiffer)
    }
}

/// Copies the pure part of `a` into `b`, returning the state mapping.
fn copy_into(b: &mut FstaBuilder, a: &Fsta) -> BTreeMap<StateId, StateId> {
    let mut map = BTreeMap::new();
    for q in a.states() {
        let id = if a.is_symbol(q) {
            b.lookup(a.label(q)).expect("shared alphabet")
        } else {
            b.fresh_state(&a.label(q).to_string())
        };
        map.insert(q, id);
    }
    for &q in a.initials() {
        b.initial(map[&q]);
    }
    for &q in a.finals() {
        b.final_state(map[&q]);
    }
    for &(p, r, c) in a.hrules() {
        b.hrule(map[&p], map[&r], map[&c]);
    }
    for q in a.states().filter(|q| !a.is_symbol(*q)) {
        for &c in a.vertical(q) {
            b.vrule(map[&q], map[&c]);
        }
    }
    map
}

/// Accepts `L(a1) ∪ L(a2)`: both automata side by side (after renaming
/// their pure states apart), with both initial and final sets united.
pub fn bool_union(a1: &Fsta, a2: &Fsta) -> Result<Fsta, AutomatonError> {
    same_alphabet(a1, a2)?;
    let (p1, p2) = (to_pure_states(a1), to_pure_states(a2));
    let mut b = Fsta::builder(Flavour::Generalised, a1.alphabet().iter().copied());
    copy_into(&mut b, &p1);
    copy_into(&mut b, &p2);
    b.build()
}

/// Accepts `L(a1) ∩ L(a2)` via the product of the two purified automata,
/// restricted to reachable state pairs.
pub fn bool_intersect(a1: &Fsta, a2: &Fsta) -> Result<Fsta, AutomatonError> {
    same_alphabet(a1, a2)?;
    let (p1, p2) = (to_pure_states(a1), to_pure_states(a2));
    let symbols: Vec<(StateId, StateId)> = a1
        .alphabet()
        .iter()
        .map(|c| (p1.symbol_state(*c).unwrap(), p2.symbol_state(*c).unwrap()))
        .collect();

    let mut pairs: Vec<(StateId, StateId)> = Vec::new();
    let mut index: BTreeMap<(StateId, StateId), usize> = BTreeMap::new();
    let mut intern = |pairs: &mut Vec<(StateId, StateId)>, pair: (StateId, StateId)| -> usize {
        *index.entry(pair).or_insert_with(|| {
            pairs.push(pair);
            pairs.len() - 1
        })
    };
    let initials: Vec<usize> = p1
        .initials()
        .iter()
        .flat_map(|&x| p2.initials().iter().map(move |&y| (x, y)))
        .collect::<Vec<_>>()
        .into_iter()
        .map(|pair| intern(&mut pairs, pair))
        .collect();

    let mut hrules: BTreeSet<(usize, Letter, usize)> = BTreeSet::new();
    let mut vrules: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut done = 0;
    let mut readable: BTreeSet<usize> = BTreeSet::new();
    loop {
        let before = (pairs.len(), readable.len());
        // vertical images of every known pair become readable letters
        for i in done..pairs.len() {
            let (x, y) = pairs[i];
            for &gx in p1.vertical(x) {
                for &gy in p2.vertical(y) {
                    let j = intern(&mut pairs, (gx, gy));
                    vrules.insert((i, j));
                    readable.insert(j);
                }
            }
        }
        done = before.0;
        let letters: Vec<(Letter, (StateId, StateId))> = symbols
            .iter()
            .enumerate()
            .map(|(k, s)| (Letter::Symbol(k), *s))
            .chain(readable.iter().map(|&j| (Letter::Pair(j), pairs[j])))
            .collect();
        for i in 0..pairs.len() {
            let (x, y) = pairs[i];
            for &(letter, (bx, by)) in &letters {
                for &cx in p1.step(x, bx) {
                    for &cy in p2.step(y, by) {
                        let j = intern(&mut pairs, (cx, cy));
                        hrules.insert((i, letter, j));
                    }
                }
            }
        }
        if (pairs.len(), readable.len()) == before && done == pairs.len() {
            break;
        }
    }

    let mut b = Fsta::builder(Flavour::Generalised, a1.alphabet().iter().copied());
    let ids: Vec<StateId> = pairs
        .iter()
        .map(|&(x, y)| b.fresh_state(&format!("({},{})", p1.label(x), p2.label(y))))
        .collect();
    for i in initials {
        b.initial(ids[i]);
    }
    for (i, &(x, y)) in pairs.iter().enumerate() {
        if p1.is_final(x) && p2.is_final(y) {
            b.final_state(ids[i]);
        }
    }
    let sym_ids: Vec<StateId> = a1
        .alphabet()
        .iter()
        .map(|c| b.symbol(*c).unwrap())
        .collect();
    for (i, letter, j) in hrules {
        let read = match letter {
            Letter::Symbol(k) => sym_ids[k],
            Letter::Pair(k) => ids[k],
        };
        b.hrule(ids[i], read, ids[j]);
    }
    for (i, j) in vrules {
        b.vrule(ids[i], ids[j]);
    }
    b.build()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Letter {
    Symbol(usize),
    Pair(usize),
}

/// Accepts every tree over the alphabet that `a` rejects: determinize,
/// complete, then swap final and non-final states.
pub fn bool_complement(a: &Fsta) -> Result<Fsta, AutomatonError> {
    let d = complete(&determinize(&to_pure_states(a)))?;
    let mut b = d.to_builder();
    let flipped = d
        .states()
        .filter(|q| !d.is_symbol(*q) && !d.is_final(*q))
        .collect();
    b.set_finals(flipped);
    b.build()
}
