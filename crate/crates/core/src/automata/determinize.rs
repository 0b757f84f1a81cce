use std::collections::{BTreeMap, BTreeSet};

use super::{rules_by_left, vertical_closure, AutomatonError, Flavour, Fsta, PureFsta, StateId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Letter {
    Symbol(StateId),
    Subset(usize),
}

/// Subset construction for a pure-state automaton of any flavour.
///
/// States of the result are sets of states of `a`; alphabet symbols keep
/// their names and stand for the singleton sets. A rule
/// `(S, L) -> {c | (p, b) -> c, p ∈ S, b ∈ Γ(L)}` is added for every
/// reachable pair, where `Γ` applies the vertical rules to set letters and
/// is the identity on symbols. Rules leading to the empty set are omitted,
/// so the result may be partial; see [`complete`].
pub fn determinize(a: &PureFsta) -> Fsta {
    let by_left = rules_by_left(a);
    let symbols: Vec<StateId> = a.states().filter(|q| a.is_symbol(*q)).collect();

    let mut subsets: Vec<BTreeSet<StateId>> = vec![a.initials().clone()];
    let mut index: BTreeMap<BTreeSet<StateId>, usize> = BTreeMap::from([(subsets[0].clone(), 0)]);
    let mut gammas: Vec<BTreeSet<StateId>> = vec![vertical_closure(a, &subsets[0])];
    let mut rules: BTreeMap<(usize, Letter), usize> = BTreeMap::new();

    loop {
        let known = subsets.len();
        let mut letters: Vec<(Letter, BTreeSet<StateId>)> = symbols
            .iter()
            .map(|&s| (Letter::Symbol(s), BTreeSet::from([s])))
            .collect();
        letters.extend((0..known).map(|j| (Letter::Subset(j), gammas[j].clone())));
        for left in 0..known {
            for (letter, readable) in &letters {
                if rules.contains_key(&(left, *letter)) {
                    continue;
                }
                let mut target = BTreeSet::new();
                for p in &subsets[left] {
                    for &(b, c) in by_left.get(p).into_iter().flatten() {
                        if readable.contains(&b) {
                            target.insert(c);
                        }
                    }
                }
                if target.is_empty() {
                    continue;
                }
                let id = *index.entry(target.clone()).or_insert_with(|| {
                    subsets.push(target.clone());
                    gammas.push(vertical_closure(a, &target));
                    subsets.len() - 1
                });
                rules.insert((left, *letter), id);
            }
        }
        if subsets.len() == known {
            break;
        }
    }

    let mut b = Fsta::builder(Flavour::Deterministic, a.alphabet().iter().copied());
    let ids: Vec<StateId> = subsets
        .iter()
        .map(|set| {
            let names: Vec<String> = set.iter().map(|q| a.label(*q).to_string()).collect();
            b.fresh_state(&format!("{{{}}}", names.join(",")))
        })
        .collect();
    b.initial(ids[0]);
    for (i, set) in subsets.iter().enumerate() {
        if set.iter().any(|q| a.is_final(*q)) {
            b.final_state(ids[i]);
        }
    }
    for (&(left, letter), &target) in &rules {
        let read = match letter {
            Letter::Symbol(s) => b.symbol(a.alphabet_symbol(s)).expect("same alphabet"),
            Letter::Subset(j) => ids[j],
        };
        b.hrule(ids[left], read, ids[target]);
    }
    b.build()
        .expect("subset construction yields a deterministic automaton")
}

impl Fsta {
    fn alphabet_symbol(&self, q: StateId) -> char {
        match self.label(q) {
            super::StateLabel::Symbol(c) => *c,
            super::StateLabel::Named(_) => unreachable!("not a symbol state"),
        }
    }
}

/// Makes a deterministic automaton total on all state pairs by sending
/// every missing pair to a new non-final sink state.
pub fn complete(a: &Fsta) -> Result<Fsta, AutomatonError> {
    if a.flavour() != Flavour::Deterministic {
        return Err(AutomatonError::NotDeterministic {
            reason: format!("complete expects dfsta, got {}", a.flavour().keyword()),
        });
    }
    if a.is_complete() {
        return Ok(a.clone());
    }
    let mut b = a.to_builder();
    let sink = b.fresh_state("sink");
    let states: Vec<StateId> = a.states().chain([sink]).collect();
    for &p in &states {
        for &q in &states {
            if p == sink || q == sink || a.step(p, q).is_empty() {
                b.hrule(p, q, sink);
            }
        }
    }
    b.build()
}
