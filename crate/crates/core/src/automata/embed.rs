//! Classical automata as string-tree automata.

use std::collections::{BTreeMap, BTreeSet};

use super::{AutomatonError, FiniteAutomaton, Flavour, Fsta, StateId};
use crate::term::{RankedTerm, Signature};

/// Recognises the single-node trees `<s>` with `s` accepted by `fa`. Trees
/// with children are rejected because no rule reads a state.
pub fn embed_fa(fa: &FiniteAutomaton) -> Fsta {
    let mut b = Fsta::builder(Flavour::Nondeterministic, fa.alphabet.iter().copied());
    let ids: Vec<StateId> = fa.state_names.iter().map(|n| b.fresh_state(n)).collect();
    b.initial(ids[fa.initial]);
    for &q in &fa.finals {
        b.final_state(ids[q]);
    }
    for (q, c, p) in fa.transitions() {
        let s = b.symbol(*c).expect("transition letter is in the alphabet");
        b.hrule(ids[q], s, ids[p]);
    }
    b.build().expect("embedding is well formed")
}

/// Recognises the vertical encodings of the strings accepted by `fa`.
///
/// States are `Q ∪ Q̄ ∪ {q'0} ∪ Σ`. Rules: `(q, a) -> p̄` for each FA move,
/// `(q'0, q̄) -> q` to resume in the parent, and `(q'0, q'0) -> q0` to leave
/// the innermost empty node. Finals are `Q̄f`, plus `q'0` if `q0` is final.
pub fn embed_fa_vertical(fa: &FiniteAutomaton) -> Fsta {
    let mut b = Fsta::builder(Flavour::Nondeterministic, fa.alphabet.iter().copied());
    let plain: Vec<StateId> = fa.state_names.iter().map(|n| b.fresh_state(n)).collect();
    let barred: Vec<StateId> = fa
        .state_names
        .iter()
        .map(|n| b.fresh_state(&format!("~{n}")))
        .collect();
    let start = b.fresh_state("q'0");
    b.initial(start);
    b.hrule(start, start, plain[fa.initial]);
    for q in 0..fa.state_count() {
        b.hrule(start, barred[q], plain[q]);
    }
    for (q, c, p) in fa.transitions() {
        let s = b.symbol(*c).expect("transition letter is in the alphabet");
        b.hrule(plain[q], s, barred[p]);
    }
    for &q in &fa.finals {
        b.final_state(barred[q]);
    }
    if fa.finals.contains(&fa.initial) {
        b.final_state(start);
    }
    b.build().expect("embedding is well formed")
}

/// One rule `f(q1, …, qn) -> q` of a bottom-up tree automaton.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NcftaRule {
    pub symbol: String,
    pub args: Vec<String>,
    pub target: String,
}

/// A nondeterministic bottom-up automaton over ranked terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ncfta {
    pub signature: Signature,
    pub states: BTreeSet<String>,
    pub finals: BTreeSet<String>,
    pub rules: Vec<NcftaRule>,
}

impl Ncfta {
    /// Checks that every rule matches its symbol's arity and uses declared
    /// states.
    pub fn validate(&self) -> Result<(), AutomatonError> {
        for r in &self.rules {
            match self.signature.get(&r.symbol) {
                None => {
                    return Err(AutomatonError::Invalid {
                        reason: format!("symbol `{}` has no arity", r.symbol),
                    })
                }
                Some(&n) if n != r.args.len() => {
                    return Err(AutomatonError::Invalid {
                        reason: format!(
                            "rule for `{}` has {} arguments, arity is {n}",
                            r.symbol,
                            r.args.len()
                        ),
                    })
                }
                _ => {}
            }
            if let Some(q) = r
                .args
                .iter()
                .chain([&r.target])
                .find(|q| !self.states.contains(*q))
            {
                return Err(AutomatonError::UnknownState(q.clone()));
            }
        }
        if let Some(q) = self.finals.iter().find(|q| !self.states.contains(*q)) {
            return Err(AutomatonError::UnknownState(q.clone()));
        }
        Ok(())
    }

    /// The states `term` can evaluate to.
    pub fn evaluate(&self, term: &RankedTerm) -> BTreeSet<String> {
        let children: Vec<BTreeSet<String>> =
            term.children.iter().map(|c| self.evaluate(c)).collect();
        self.rules
            .iter()
            .filter(|r| r.symbol == term.symbol && r.args.len() == children.len())
            .filter(|r| r.args.iter().zip(&children).all(|(q, set)| set.contains(q)))
            .map(|r| r.target.clone())
            .collect()
    }

    pub fn accepts(&self, term: &RankedTerm) -> bool {
        self.evaluate(term).iter().any(|q| self.finals.contains(q))
    }
}

/// Recognises the term encodings of the terms accepted by `c`.
///
/// A rule `f(q1, …, qp) -> q` becomes a chain from the initial state that
/// reads the characters of `f`, then the child states `q1 … qp`, through
/// fresh intermediate states, ending in `q`. A nullary rule on a
/// one-character symbol is the single rule `(q0, f) -> q`.
pub fn embed_cta(c: &Ncfta) -> Fsta {
    let alphabet: BTreeSet<char> = c.signature.keys().flat_map(|f| f.chars()).collect();
    let mut b = Fsta::builder(Flavour::Nondeterministic, alphabet);
    let q0 = b.fresh_state("q0");
    b.initial(q0);
    let hat: BTreeMap<&String, StateId> = c.states.iter().map(|q| (q, b.fresh_state(q))).collect();
    for q in &c.finals {
        b.final_state(hat[q]);
    }
    for (i, r) in c.rules.iter().enumerate() {
        let reads: Vec<StateId> = r
            .symbol
            .chars()
            .map(|ch| b.symbol(ch).expect("symbol character is in the alphabet"))
            .chain(r.args.iter().map(|q| hat[q]))
            .collect();
        let mut current = q0;
        for (j, &read) in reads.iter().enumerate() {
            let next = if j + 1 == reads.len() {
                hat[&r.target]
            } else {
                b.fresh_state(&format!("r{i}_{}", j + 1))
            };
            b.hrule(current, read, next);
            current = next;
        }
    }
    b.build().expect("embedding is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{run_accept, trace_run, StepKind};
    use crate::term::term_encode;
    use crate::tree::{parse_tree, vertical_encode, StringTree};

    fn a_star() -> FiniteAutomaton {
        let mut fa = FiniteAutomaton::new(['a']);
        fa.add_transition(0, 'a', 0);
        fa.set_final(0);
        fa
    }

    fn just_ab() -> FiniteAutomaton {
        let mut fa = FiniteAutomaton::new(['a', 'b']);
        let q1 = fa.add_state("q1");
        let q2 = fa.add_state("q2");
        fa.add_transition(0, 'a', q1);
        fa.add_transition(q1, 'b', q2);
        fa.set_final(q2);
        fa
    }

    fn accepts(a: &Fsta, text: &str) -> bool {
        run_accept(a, &parse_tree(text).unwrap()).unwrap()
    }

    #[test]
    fn horizontal_embedding_of_a_star() {
        let a = embed_fa(&a_star());
        assert!(accepts(&a, "<>"));
        assert!(accepts(&a, "<a>"));
        assert!(accepts(&a, "<aa>"));
        assert!(!accepts(&a, "<<a>>"));
        assert!(!accepts(&embed_fa(&just_ab()), "<>"));
    }

    #[test]
    fn vertical_embedding_of_ab() {
        let a = embed_fa_vertical(&just_ab());
        assert!(run_accept(&a, &vertical_encode("ab")).unwrap());
        assert!(!run_accept(&a, &vertical_encode("ba")).unwrap());
        assert!(!run_accept(&a, &StringTree::null()).unwrap());
        assert!(run_accept(&embed_fa_vertical(&a_star()), &StringTree::null()).unwrap());

        let trace = trace_run(&a, &vertical_encode("ab"), 100).unwrap().unwrap();
        assert_eq!(trace.steps.len(), 1 + 4 * 2);
        assert!(matches!(trace.steps[0].kind, StepKind::Initial { .. }));
        for chunk in trace.steps[1..].chunks(4) {
            assert!(matches!(chunk[0].kind, StepKind::Vertical { .. }));
            assert!(matches!(chunk[1].kind, StepKind::Initial { .. }));
            assert!(matches!(chunk[2].kind, StepKind::Horizontal { .. }));
            assert!(matches!(chunk[3].kind, StepKind::Horizontal { .. }));
        }
    }

    fn plus_automaton() -> Ncfta {
        let signature = Signature::from([("+".into(), 2), ("1".into(), 0), ("2".into(), 0)]);
        let rule = |s: &str, args: &[&str]| NcftaRule {
            symbol: s.into(),
            args: args.iter().map(|a| a.to_string()).collect(),
            target: "q".into(),
        };
        Ncfta {
            signature,
            states: BTreeSet::from(["q".into()]),
            finals: BTreeSet::from(["q".into()]),
            rules: vec![rule("1", &[]), rule("2", &[]), rule("+", &["q", "q"])],
        }
    }

    #[test]
    fn term_automaton_embedding() {
        let c = plus_automaton();
        c.validate().unwrap();
        let a = embed_cta(&c);
        let t = RankedTerm::apply(
            "+",
            vec![RankedTerm::constant("1"), RankedTerm::constant("2")],
        );
        assert!(c.accepts(&t));
        assert!(run_accept(&a, &term_encode(&t)).unwrap());
        // the nullary rule 1 -> q is the single rule (q0, 1) -> q
        let q0 = a.named_state("q0").unwrap();
        let one = a.symbol_state('1').unwrap();
        assert_eq!(a.step(q0, one), &[a.named_state("q").unwrap()]);
    }

    #[test]
    fn rejected_term_is_rejected_after_embedding() {
        let mut c = plus_automaton();
        c.rules.retain(|r| r.symbol != "2");
        let t = RankedTerm::apply(
            "+",
            vec![RankedTerm::constant("1"), RankedTerm::constant("2")],
        );
        assert!(!c.accepts(&t));
        assert!(!run_accept(&embed_cta(&c), &term_encode(&t)).unwrap());
    }
}
