use std::collections::BTreeSet;

use super::Regex;
use crate::automata::FiniteAutomaton;

struct Positions<L> {
    letters: Vec<L>,
    follow: Vec<BTreeSet<usize>>,
}

/// `(nullable, first, last)` of a subexpression; positions start at 1.
type Summary = (bool, BTreeSet<usize>, BTreeSet<usize>);

impl<L: Clone> Positions<L> {
    fn walk(&mut self, r: &Regex<L>) -> Summary {
        match r {
            Regex::Empty => (false, BTreeSet::new(), BTreeSet::new()),
            Regex::Epsilon => (true, BTreeSet::new(), BTreeSet::new()),
            Regex::Atom(l) => {
                self.letters.push(l.clone());
                self.follow.push(BTreeSet::new());
                let p = self.letters.len();
                (false, BTreeSet::from([p]), BTreeSet::from([p]))
            }
            Regex::Union(ps) => {
                let mut acc: Summary = (false, BTreeSet::new(), BTreeSet::new());
                for p in ps {
                    let (n, f, l) = self.walk(p);
                    acc.0 |= n;
                    acc.1.extend(f);
                    acc.2.extend(l);
                }
                acc
            }
            Regex::Concat(ps) => {
                let mut acc: Summary = (true, BTreeSet::new(), BTreeSet::new());
                for p in ps {
                    let (n, f, l) = self.walk(p);
                    for &q in &acc.2 {
                        self.follow[q - 1].extend(f.iter().copied());
                    }
                    if acc.0 {
                        acc.1.extend(f);
                    }
                    if n {
                        acc.2.extend(l);
                    } else {
                        acc.2 = l;
                    }
                    acc.0 &= n;
                }
                acc
            }
            Regex::Star(inner) => {
                let (_, f, l) = self.walk(inner);
                for &q in &l {
                    self.follow[q - 1].extend(f.iter().copied());
                }
                (true, f, l)
            }
        }
    }
}

/// The position automaton of `r`: one state per atom occurrence plus an
/// initial state, and no ε-moves.
pub fn regex_to_nfa<L: Ord + Clone>(r: &Regex<L>) -> FiniteAutomaton<L> {
    let mut pos = Positions {
        letters: Vec::new(),
        follow: Vec::new(),
    };
    let (nullable, first, last) = pos.walk(r);
    let mut fa = FiniteAutomaton::new(pos.letters.iter().cloned());
    for i in 1..=pos.letters.len() {
        fa.add_state(format!("p{i}"));
    }
    for &p in &first {
        fa.add_transition(0, pos.letters[p - 1].clone(), p);
    }
    for (i, follow) in pos.follow.iter().enumerate() {
        for &p in follow {
            fa.add_transition(i + 1, pos.letters[p - 1].clone(), p);
        }
    }
    for p in last {
        fa.set_final(p);
    }
    if nullable {
        fa.set_final(0);
    }
    fa
}

#[cfg(test)]
mod tests {
    use super::*;

    type R = Regex<char>;

    fn a_or_b_star() -> R {
        R::star(R::union([R::atom('a'), R::atom('b')]))
    }

    #[test]
    fn star_of_union() {
        let fa = regex_to_nfa(&a_or_b_star());
        assert_eq!(fa.state_count(), 3);
        for (s, ok) in [("", true), ("abab", true), ("abc", false)] {
            assert_eq!(fa.accepts_str(s), ok, "{s:?}");
        }
    }

    #[test]
    fn single_atom_and_empty() {
        let fa = regex_to_nfa(&R::atom('a'));
        assert!(fa.accepts_str("a"));
        assert!(!fa.accepts_str(""));
        assert!(!fa.accepts_str("aa"));
        let none = regex_to_nfa(&R::Empty);
        assert!(!none.accepts_str(""));
    }

    #[test]
    fn concatenation_with_nullable_parts() {
        // a* b? c
        let r = R::concat([
            R::star(R::atom('a')),
            R::union([R::atom('b'), R::Epsilon]),
            R::atom('c'),
        ]);
        let fa = regex_to_nfa(&r);
        for (s, ok) in [
            ("c", true),
            ("aac", true),
            ("abc", true),
            ("bc", true),
            ("ab", false),
            ("cb", false),
        ] {
            assert_eq!(fa.accepts_str(s), ok, "{s:?}");
        }
    }
}
