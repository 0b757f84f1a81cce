use std::collections::{BTreeMap, BTreeSet};

use super::{nfa_to_regex, regex_to_nfa, GSym, Rstg, Rule};
use crate::automata::{to_pure_states, FiniteAutomaton, Flavour, Fsta, StateId};

/// The generalised automaton of `g`. Each rule `n -> <e>` contributes the
/// position automaton of `e` with its own states: its transitions become
/// horizontal rules, its initial state joins the initial set, and its final
/// states pass `n` up to the parent. Final states of the axiom's rules are
/// accepting.
pub fn grammar_to_automaton(g: &Rstg) -> Fsta {
    let mut b = Fsta::builder(Flavour::Generalised, g.alphabet().iter().copied());
    let nts: BTreeMap<&str, StateId> = g
        .nonterminals()
        .iter()
        .map(|n| (n.as_str(), b.state(n)))
        .collect();
    for (i, rule) in g.rules().iter().enumerate() {
        let fa = regex_to_nfa(&rule.rhs);
        let ids: Vec<StateId> = fa
            .state_names
            .iter()
            .map(|name| b.fresh_state(&format!("r{i}.{name}")))
            .collect();
        b.initial(ids[fa.initial]);
        for (p, letter, q) in fa.transitions() {
            let read = match letter {
                GSym::T(c) => b.symbol(*c).expect("terminal is in the alphabet"),
                GSym::N(n) => nts[n.as_str()],
            };
            b.hrule(ids[p], read, ids[q]);
        }
        for &f in &fa.finals {
            b.vrule(ids[f], nts[rule.lhs.as_str()]);
            if rule.lhs == g.start() {
                b.final_state(ids[f]);
            }
        }
    }
    b.build().expect("grammar automaton is well formed")
}

/// A grammar for `L(a)`. The automaton is purified first; every pure state
/// `p` becomes a nonterminal generating the trees that can be read as `p`
/// by a parent, and a fresh axiom generates the accepted trees. Rules whose
/// language is empty are dropped.
pub fn automaton_to_grammar(a: &Fsta) -> Rstg {
    let p = to_pure_states(a);
    let name = |q: StateId| p.label(q).to_string();
    let pure: Vec<StateId> = p.states().filter(|q| !p.is_symbol(*q)).collect();
    let names: BTreeSet<String> = pure.iter().map(|q| name(*q)).collect();
    let start = (0..)
        .map(|i| {
            if i == 0 {
                "S".to_string()
            } else {
                format!("S{i}")
            }
        })
        .find(|s| !names.contains(s))
        .unwrap();

    let mut delta: BTreeMap<(usize, GSym), BTreeSet<usize>> = BTreeMap::new();
    for &(x, r, y) in p.hrules() {
        let letter = match p.label(r) {
            crate::automata::StateLabel::Symbol(c) => GSym::T(*c),
            crate::automata::StateLabel::Named(n) => GSym::N(n.clone()),
        };
        delta
            .entry((x.index(), letter))
            .or_default()
            .insert(y.index());
    }
    let base = FiniteAutomaton {
        alphabet: delta.keys().map(|(_, l)| l.clone()).collect(),
        state_names: p.states().map(name).collect(),
        initial: 0,
        finals: BTreeSet::new(),
        delta,
    };

    let mut targets: Vec<(String, BTreeSet<usize>)> = vec![(
        start.clone(),
        p.finals().iter().map(|q| q.index()).collect(),
    )];
    for &t in &pure {
        let readable_as_t = pure
            .iter()
            .filter(|q| p.vertical(**q).contains(&t))
            .map(|q| q.index())
            .collect();
        targets.push((name(t), readable_as_t));
    }

    let mut rules: Vec<Rule> = Vec::new();
    for &q0 in p.initials() {
        for (lhs, finals) in &targets {
            let fa = FiniteAutomaton {
                initial: q0.index(),
                finals: finals.clone(),
                ..base.clone()
            };
            let rhs = nfa_to_regex(&fa);
            if rhs == super::Regex::Empty {
                continue;
            }
            let rule = Rule {
                lhs: lhs.clone(),
                rhs,
            };
            if !rules.contains(&rule) {
                rules.push(rule);
            }
        }
    }
    let mut nonterminals = names;
    nonterminals.insert(start.clone());
    Rstg::new(p.alphabet().clone(), nonterminals, start, rules)
        .expect("automaton grammar is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{brute_force_accept, example_single_letter, run_accept};
    use crate::grammar::{language_up_to, parse_grammar, Regex};
    use crate::tree::{parse_tree, StringTree};

    #[test]
    fn recursive_grammar_accepts_all_trees_over_a() {
        let g = parse_grammar("start: S\nrule: S -> < (a|S)* >").unwrap();
        let a = grammar_to_automaton(&g);
        for t in StringTree::enumerate(&['a'].into(), 6) {
            assert!(brute_force_accept(&a, &t).unwrap(), "{t}");
        }
    }

    #[test]
    fn epsilon_rule_accepts_only_the_null_tree() {
        let g = parse_grammar("start: S\nalphabet: a\nrule: S -> <>").unwrap();
        let a = grammar_to_automaton(&g);
        for t in StringTree::enumerate(&['a'].into(), 5) {
            assert_eq!(run_accept(&a, &t).unwrap(), t.is_null(), "{t}");
        }
    }

    #[test]
    fn example_language_as_grammar() {
        let g = parse_grammar(
            "start: S\nrule: S -> < (a|A)(a|A)* | (b|B)(b|B)* | eps >\nrule: A -> < (a|A)(a|A)* >\nrule: B -> < (b|B)(b|B)* >",
        )
        .unwrap();
        let a = grammar_to_automaton(&g);
        let ex = example_single_letter();
        for t in StringTree::enumerate(&['a', 'b'].into(), 5) {
            assert_eq!(
                run_accept(&a, &t).unwrap(),
                run_accept(&ex, &t).unwrap(),
                "{t}"
            );
        }
    }

    #[test]
    fn automaton_states_are_disjoint_per_rule() {
        let g = parse_grammar("start: S\nrule: S -> < a S >\nrule: S -> < b >").unwrap();
        let a = grammar_to_automaton(&g);
        let names: Vec<String> = a.states().map(|q| a.label(q).to_string()).collect();
        assert!(names.contains(&"r0.q0".to_string()));
        assert!(names.contains(&"r1.q0".to_string()));
        assert!(run_accept(&a, &parse_tree("<a<a<b>>>").unwrap()).unwrap());
    }

    #[test]
    fn example_automaton_to_grammar() {
        let ex = example_single_letter();
        let g = automaton_to_grammar(&ex);
        let lang = language_up_to(&g, 5);
        for t in StringTree::enumerate(&['a', 'b'].into(), 5) {
            assert_eq!(lang.contains(&t), run_accept(&ex, &t).unwrap(), "{t}");
        }
    }

    #[test]
    fn null_tree_only_automaton() {
        let mut b = Fsta::builder(Flavour::Nondeterministic, ['a']);
        let q = b.state("q0");
        b.initial(q).final_state(q);
        let g = automaton_to_grammar(&b.build().unwrap());
        let axiom: Vec<&Rule> = g.rules().iter().filter(|r| r.lhs == g.start()).collect();
        assert_eq!(axiom.len(), 1);
        assert_eq!(axiom[0].rhs, Regex::Epsilon);
    }
}
