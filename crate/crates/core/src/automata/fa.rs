use std::collections::{BTreeMap, BTreeSet};

/// A classical nondeterministic finite automaton over letters of type `L`,
/// without ε-moves. States are `0..state_count()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAutomaton<L: Ord = char> {
    pub alphabet: BTreeSet<L>,
    pub state_names: Vec<String>,
    pub initial: usize,
    pub finals: BTreeSet<usize>,
    pub delta: BTreeMap<(usize, L), BTreeSet<usize>>,
}

impl<L: Ord + Clone> FiniteAutomaton<L> {
    /// An automaton with a single non-final initial state named `q0`.
    pub fn new(alphabet: impl IntoIterator<Item = L>) -> Self {
        FiniteAutomaton {
            alphabet: alphabet.into_iter().collect(),
            state_names: vec!["q0".into()],
            initial: 0,
            finals: BTreeSet::new(),
            delta: BTreeMap::new(),
        }
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> usize {
        self.state_names.push(name.into());
        self.state_names.len() - 1
    }

    pub fn add_transition(&mut self, from: usize, letter: L, to: usize) {
        self.alphabet.insert(letter.clone());
        self.delta.entry((from, letter)).or_default().insert(to);
    }

    pub fn set_final(&mut self, q: usize) {
        self.finals.insert(q);
    }

    pub fn targets(&self, q: usize, letter: &L) -> impl Iterator<Item = usize> + '_ {
        // BTreeMap lookup with a borrowed tuple needs an owned key
        self.delta
            .get(&(q, letter.clone()))
            .into_iter()
            .flatten()
            .copied()
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, &L, usize)> + '_ {
        self.delta
            .iter()
            .flat_map(|((q, l), ps)| ps.iter().map(move |p| (*q, l, *p)))
    }

    pub fn accepts<'a>(&self, word: impl IntoIterator<Item = &'a L>) -> bool
    where
        L: 'a,
    {
        let mut current = BTreeSet::from([self.initial]);
        for letter in word {
            current = current
                .iter()
                .flat_map(|&q| self.targets(q, letter))
                .collect();
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|q| self.finals.contains(q))
    }
}

impl FiniteAutomaton<char> {
    pub fn accepts_str(&self, s: &str) -> bool {
        let letters: Vec<char> = s.chars().collect();
        self.accepts(&letters)
    }
}
