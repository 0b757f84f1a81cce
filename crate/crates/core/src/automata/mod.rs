//! Finite string-tree automata.
//!
//! An automaton reads a tree bottom-up. Each leaf label is consumed left to
//! right starting from an initial state; horizontal rules `(p, b) -> c`
//! combine the current state with the next label entry. A finished node
//! hands its state (through the vertical rules, for generalised automata)
//! to its parent, where it is read like any other label entry. The input
//! alphabet is a subset of the state set, so symbols may double as states.

mod boolean;
mod determinize;
mod embed;
mod fa;
mod pure;
mod run;
mod stateset;
mod text;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::tree::Symbol;

pub use boolean::{bool_complement, bool_intersect, bool_union};
pub use determinize::{complete, determinize};
pub use embed::{embed_cta, embed_fa, embed_fa_vertical, Ncfta, NcftaRule};
pub use fa::FiniteAutomaton;
pub use pure::{to_pure_states, PureFsta};
pub use run::{
    brute_force_accept, brute_force_accept_leftmost, run_accept, successors, trace_length,
    trace_run, RunItem, RunTrace, RunTree, StepKind, TraceStep,
};
pub use stateset::StateSet;
pub use text::{parse_fa, parse_fsta, parse_ncfta, write_fa, write_fsta};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("symbol {symbol:?} is not in the automaton's alphabet")]
    AlphabetMismatch { symbol: Symbol },
    #[error("automata have different alphabets")]
    AlphabetsDiffer,
    #[error("automaton has impure states: {reason}")]
    ImpureInput { reason: String },
    #[error("automaton is not deterministic: {reason}")]
    NotDeterministic { reason: String },
    #[error("invalid automaton: {reason}")]
    Invalid { reason: String },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("a run needs {needed} steps but the budget is {limit}")]
    BudgetExceeded { needed: usize, limit: usize },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    fn from_index(i: usize) -> Self {
        StateId(u32::try_from(i).expect("state count fits in u32"))
    }
}

/// How a state is shown: an alphabet symbol used as a state, or a named
/// state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateLabel {
    Symbol(Symbol),
    Named(String),
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateLabel::Symbol(c) => write!(f, "{c}"),
            StateLabel::Named(n) => f.write_str(n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavour {
    Deterministic,
    Nondeterministic,
    Generalised,
}

impl Flavour {
    pub fn keyword(self) -> &'static str {
        match self {
            Flavour::Deterministic => "dfsta",
            Flavour::Nondeterministic => "nfsta",
            Flavour::Generalised => "gnfsta",
        }
    }
}

/// A finite string-tree automaton of any flavour. Immutable once built.
#[derive(Debug, Clone)]
pub struct Fsta {
    flavour: Flavour,
    alphabet: BTreeSet<Symbol>,
    labels: Vec<StateLabel>,
    lookup: HashMap<StateLabel, StateId>,
    initials: BTreeSet<StateId>,
    finals: BTreeSet<StateId>,
    hrules: BTreeSet<(StateId, StateId, StateId)>,
    vrules: BTreeSet<(StateId, StateId)>,
    delta: HashMap<(StateId, StateId), Vec<StateId>>,
    gamma: Vec<Vec<StateId>>,
}

impl Fsta {
    pub fn builder(flavour: Flavour, alphabet: impl IntoIterator<Item = Symbol>) -> FstaBuilder {
        FstaBuilder::new(flavour, alphabet)
    }

    pub fn flavour(&self) -> Flavour {
        self.flavour
    }

    pub fn alphabet(&self) -> &BTreeSet<Symbol> {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.labels.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.labels.len()).map(StateId::from_index)
    }

    pub fn label(&self, q: StateId) -> &StateLabel {
        &self.labels[q.index()]
    }

    pub fn is_symbol(&self, q: StateId) -> bool {
        matches!(self.labels[q.index()], StateLabel::Symbol(_))
    }

    pub fn symbol_state(&self, c: Symbol) -> Option<StateId> {
        self.lookup.get(&StateLabel::Symbol(c)).copied()
    }

    pub fn named_state(&self, name: &str) -> Option<StateId> {
        self.lookup
            .get(&StateLabel::Named(name.to_string()))
            .copied()
    }

    pub fn lookup(&self, label: &StateLabel) -> Option<StateId> {
        self.lookup.get(label).copied()
    }

    pub fn initials(&self) -> &BTreeSet<StateId> {
        &self.initials
    }

    /// The single initial state of a plain (non-generalised) automaton.
    pub fn initial(&self) -> Option<StateId> {
        match self.flavour {
            Flavour::Generalised => None,
            _ => self.initials.iter().next().copied(),
        }
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals.contains(&q)
    }

    pub fn hrules(&self) -> &BTreeSet<(StateId, StateId, StateId)> {
        &self.hrules
    }

    /// Explicit vertical rules; empty for plain automata.
    pub fn vrules(&self) -> &BTreeSet<(StateId, StateId)> {
        &self.vrules
    }

    /// Targets of `(p, b) -> _`.
    pub fn step(&self, p: StateId, b: StateId) -> &[StateId] {
        self.delta.get(&(p, b)).map_or(&[], Vec::as_slice)
    }

    /// States a finished node in state `q` may hand to its parent. Plain
    /// automata pass the state through unchanged.
    pub fn vertical(&self, q: StateId) -> &[StateId] {
        &self.gamma[q.index()]
    }

    /// True if no rule, initial or final state uses an alphabet symbol as a
    /// state, and no rule produces one.
    pub fn has_pure_states(&self) -> bool {
        self.impurity().is_none()
    }

    fn impurity(&self) -> Option<String> {
        let sym = |q: StateId| self.is_symbol(q);
        if let Some(q) = self.initials.iter().find(|q| sym(**q)) {
            return Some(format!("initial state {} is a symbol", self.label(*q)));
        }
        if let Some(q) = self.finals.iter().find(|q| sym(**q)) {
            return Some(format!("final state {} is a symbol", self.label(*q)));
        }
        for &(p, _, c) in &self.hrules {
            if sym(p) || sym(c) {
                return Some(format!(
                    "horizontal rule uses symbol {} as a state",
                    self.label(if sym(p) { p } else { c })
                ));
            }
        }
        for &(p, c) in &self.vrules {
            if sym(p) || sym(c) {
                return Some("vertical rule uses a symbol as a state".into());
            }
        }
        None
    }

    /// True when every `(q1, q2)` pair over all states has exactly one rule.
    pub fn is_complete(&self) -> bool {
        let n = self.state_count();
        self.flavour == Flavour::Deterministic && self.hrules.len() == n * n
    }

    pub fn to_builder(&self) -> FstaBuilder {
        FstaBuilder {
            flavour: self.flavour,
            alphabet: self.alphabet.clone(),
            labels: self.labels.clone(),
            lookup: self.lookup.clone(),
            initials: self.initials.clone(),
            finals: self.finals.clone(),
            hrules: self.hrules.clone(),
            vrules: self.vrules.clone(),
        }
    }
}

fn fresh_name(
    lookup: &HashMap<StateLabel, StateId>,
    alphabet: &BTreeSet<Symbol>,
    base: &str,
) -> String {
    let taken = |name: &str| {
        lookup.contains_key(&StateLabel::Named(name.to_string()))
            || (name.chars().count() == 1 && alphabet.contains(&name.chars().next().unwrap()))
    };
    if !taken(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !taken(n))
        .unwrap()
}

/// Incremental construction of an [`Fsta`]; `build` checks the flavour's
/// invariants.
#[derive(Debug, Clone)]
pub struct FstaBuilder {
    flavour: Flavour,
    alphabet: BTreeSet<Symbol>,
    labels: Vec<StateLabel>,
    lookup: HashMap<StateLabel, StateId>,
    initials: BTreeSet<StateId>,
    finals: BTreeSet<StateId>,
    hrules: BTreeSet<(StateId, StateId, StateId)>,
    vrules: BTreeSet<(StateId, StateId)>,
}

impl FstaBuilder {
    pub fn new(flavour: Flavour, alphabet: impl IntoIterator<Item = Symbol>) -> Self {
        let alphabet: BTreeSet<Symbol> = alphabet.into_iter().collect();
        let mut b = FstaBuilder {
            flavour,
            alphabet: BTreeSet::new(),
            labels: Vec::new(),
            lookup: HashMap::new(),
            initials: BTreeSet::new(),
            finals: BTreeSet::new(),
            hrules: BTreeSet::new(),
            vrules: BTreeSet::new(),
        };
        for c in alphabet {
            b.alphabet.insert(c);
            b.intern(StateLabel::Symbol(c));
        }
        b
    }

    pub fn flavour(&mut self, flavour: Flavour) -> &mut Self {
        self.flavour = flavour;
        self
    }

    fn intern(&mut self, label: StateLabel) -> StateId {
        if let Some(id) = self.lookup.get(&label) {
            return *id;
        }
        let id = StateId::from_index(self.labels.len());
        self.labels.push(label.clone());
        self.lookup.insert(label, id);
        id
    }

    /// Gets or creates the named state `name`.
    pub fn state(&mut self, name: &str) -> StateId {
        self.intern(StateLabel::Named(name.to_string()))
    }

    /// Creates a new named state whose name starts with `base`.
    pub fn fresh_state(&mut self, base: &str) -> StateId {
        let name = fresh_name(&self.lookup, &self.alphabet, base);
        self.state(&name)
    }

    /// The state standing for alphabet symbol `c`.
    pub fn symbol(&self, c: Symbol) -> Option<StateId> {
        self.lookup.get(&StateLabel::Symbol(c)).copied()
    }

    pub fn lookup(&self, label: &StateLabel) -> Option<StateId> {
        self.lookup.get(label).copied()
    }

    pub fn label(&self, q: StateId) -> &StateLabel {
        &self.labels[q.index()]
    }

    pub fn initial(&mut self, q: StateId) -> &mut Self {
        self.initials.insert(q);
        self
    }

    pub fn clear_initials(&mut self) -> &mut Self {
        self.initials.clear();
        self
    }

    pub fn final_state(&mut self, q: StateId) -> &mut Self {
        self.finals.insert(q);
        self
    }

    pub fn set_finals(&mut self, finals: BTreeSet<StateId>) -> &mut Self {
        self.finals = finals;
        self
    }

    pub fn hrule(&mut self, p: StateId, b: StateId, c: StateId) -> &mut Self {
        self.hrules.insert((p, b, c));
        self
    }

    pub fn vrule(&mut self, p: StateId, c: StateId) -> &mut Self {
        self.vrules.insert((p, c));
        self
    }

    pub fn build(&self) -> Result<Fsta, AutomatonError> {
        let n = self.labels.len();
        let in_range = |q: &StateId| q.index() < n;
        if !self.initials.iter().all(in_range)
            || !self.finals.iter().all(in_range)
            || !self
                .hrules
                .iter()
                .all(|(a, b, c)| in_range(a) && in_range(b) && in_range(c))
            || !self.vrules.iter().all(|(a, b)| in_range(a) && in_range(b))
        {
            return Err(AutomatonError::Invalid {
                reason: "rule refers to an unknown state".into(),
            });
        }
        if self.flavour != Flavour::Generalised {
            if self.initials.len() != 1 {
                return Err(AutomatonError::Invalid {
                    reason: format!(
                        "{} needs exactly one initial state, found {}",
                        self.flavour.keyword(),
                        self.initials.len()
                    ),
                });
            }
            if !self.vrules.is_empty() {
                return Err(AutomatonError::Invalid {
                    reason: "vertical rules are only allowed in gnfsta".into(),
                });
            }
        }
        let mut delta: HashMap<(StateId, StateId), Vec<StateId>> = HashMap::new();
        for &(a, b, c) in &self.hrules {
            delta.entry((a, b)).or_default().push(c);
        }
        if self.flavour == Flavour::Deterministic {
            if let Some(((a, b), _)) = delta.iter().find(|(_, v)| v.len() > 1) {
                return Err(AutomatonError::NotDeterministic {
                    reason: format!(
                        "several rules for ({}, {})",
                        self.labels[a.index()],
                        self.labels[b.index()]
                    ),
                });
            }
        }
        let gamma = if self.flavour == Flavour::Generalised {
            let mut g: Vec<Vec<StateId>> = vec![Vec::new(); n];
            for &(a, c) in &self.vrules {
                g[a.index()].push(c);
            }
            g
        } else {
            (0..n).map(|i| vec![StateId::from_index(i)]).collect()
        };
        Ok(Fsta {
            flavour: self.flavour,
            alphabet: self.alphabet.clone(),
            labels: self.labels.clone(),
            lookup: self.lookup.clone(),
            initials: self.initials.clone(),
            finals: self.finals.clone(),
            hrules: self.hrules.clone(),
            vrules: self.vrules.clone(),
            delta,
            gamma,
        })
    }
}

/// Union of `γ(q)` over a set, with `γ(a) = {a}` for alphabet symbols.
pub(crate) fn vertical_closure(a: &Fsta, set: &BTreeSet<StateId>) -> BTreeSet<StateId> {
    let mut out = BTreeSet::new();
    for &q in set {
        if a.is_symbol(q) {
            out.insert(q);
        } else {
            out.extend(a.vertical(q).iter().copied());
        }
    }
    out
}

/// Groups the horizontal rules by left operand for quick scanning.
pub(crate) fn rules_by_left(a: &Fsta) -> BTreeMap<StateId, Vec<(StateId, StateId)>> {
    let mut out: BTreeMap<StateId, Vec<(StateId, StateId)>> = BTreeMap::new();
    for &(p, b, c) in a.hrules() {
        out.entry(p).or_default().push((b, c));
    }
    out
}

/// The automaton that accepts trees whose labels all use one common
/// letter: every label is `a…a` or `b…b`.
pub fn example_single_letter() -> Fsta {
    let mut b = Fsta::builder(Flavour::Nondeterministic, ['a', 'b']);
    let q0 = b.state("q0");
    let a = b.symbol('a').unwrap();
    let bs = b.symbol('b').unwrap();
    b.initial(q0);
    b.hrule(q0, a, a)
        .hrule(a, a, a)
        .hrule(q0, bs, bs)
        .hrule(bs, bs, bs);
    b.final_state(q0).final_state(a).final_state(bs);
    b.build().expect("example automaton is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_rejects_duplicate_left_sides() {
        let mut b = Fsta::builder(Flavour::Deterministic, ['a']);
        let q = b.state("q");
        let a = b.symbol('a').unwrap();
        b.initial(q).hrule(q, a, q).hrule(q, a, a);
        assert!(matches!(
            b.build(),
            Err(AutomatonError::NotDeterministic { .. })
        ));
    }

    #[test]
    fn plain_flavours_need_one_initial_and_no_vrules() {
        let mut b = Fsta::builder(Flavour::Nondeterministic, ['a']);
        let q = b.state("q");
        let r = b.state("r");
        b.initial(q).initial(r);
        assert!(b.build().is_err());
        let mut b = Fsta::builder(Flavour::Nondeterministic, ['a']);
        let q = b.state("q");
        b.initial(q).vrule(q, q);
        assert!(b.build().is_err());
        b.flavour(Flavour::Generalised);
        assert!(b.build().is_ok());
    }

    #[test]
    fn symbols_are_states() {
        let a = example_single_letter();
        assert_eq!(a.state_count(), 3);
        assert!(a.is_symbol(a.symbol_state('a').unwrap()));
        assert!(!a.has_pure_states());
        assert_eq!(a.vertical(a.symbol_state('b').unwrap()).len(), 1);
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let mut b = example_single_letter().to_builder();
        let names: Vec<String> = ["q0", "a", "sink"]
            .iter()
            .map(|n| {
                let q = b.fresh_state(n);
                b.label(q).to_string()
            })
            .collect();
        assert_eq!(names, vec!["q01", "a1", "sink"]);
    }
}
