use std::collections::BTreeMap;

use super::Regex;
use crate::automata::FiniteAutomaton;

/// A regular expression for the language of `fa`, by state elimination in
/// increasing state order. Returns [`Regex::Empty`] when no final state is
/// reachable.
pub fn nfa_to_regex<L: Ord + Clone>(fa: &FiniteAutomaton<L>) -> Regex<L> {
    let n = fa.state_count();
    let (start, end) = (n, n + 1);
    let mut edges: BTreeMap<(usize, usize), Regex<L>> = BTreeMap::new();
    let add = |edges: &mut BTreeMap<(usize, usize), Regex<L>>, p, q, r: Regex<L>| {
        let merged = match edges.remove(&(p, q)) {
            Some(old) => Regex::union([old, r]),
            None => r,
        };
        edges.insert((p, q), merged);
    };
    add(&mut edges, start, fa.initial, Regex::Epsilon);
    for &f in &fa.finals {
        add(&mut edges, f, end, Regex::Epsilon);
    }
    for (p, l, q) in fa.transitions() {
        add(&mut edges, p, q, Regex::atom(l.clone()));
    }

    for k in 0..n {
        let loop_k = edges
            .remove(&(k, k))
            .map(Regex::star)
            .unwrap_or(Regex::Epsilon);
        let incoming: Vec<(usize, Regex<L>)> = edges
            .iter()
            .filter(|((_, q), _)| *q == k)
            .map(|((p, _), r)| (*p, r.clone()))
            .collect();
        let outgoing: Vec<(usize, Regex<L>)> = edges
            .iter()
            .filter(|((p, _), _)| *p == k)
            .map(|((_, q), r)| (*q, r.clone()))
            .collect();
        edges.retain(|(p, q), _| *p != k && *q != k);
        for (p, into) in &incoming {
            for (q, out) in &outgoing {
                let path = Regex::concat([into.clone(), loop_k.clone(), out.clone()]);
                add(&mut edges, *p, *q, path);
            }
        }
    }
    edges.remove(&(start, end)).unwrap_or(Regex::Empty)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::regex_to_nfa;

    #[test]
    fn self_loop_gives_star() {
        let mut fa = FiniteAutomaton::new(['a']);
        fa.add_transition(0, 'a', 0);
        fa.set_final(0);
        assert_eq!(nfa_to_regex(&fa), Regex::star(Regex::atom('a')));
    }

    #[test]
    fn unreachable_finals_give_empty() {
        let mut fa = FiniteAutomaton::new(['a']);
        let q = fa.add_state("q");
        fa.set_final(q);
        assert_eq!(nfa_to_regex(&fa), Regex::Empty);
    }

    #[test]
    fn round_trip_through_glushkov() {
        let mut fa = FiniteAutomaton::new(['a', 'b']);
        let q1 = fa.add_state("q1");
        fa.add_transition(0, 'a', q1);
        fa.add_transition(q1, 'b', 0);
        fa.add_transition(q1, 'a', q1);
        fa.set_final(q1);
        let back = regex_to_nfa(&nfa_to_regex(&fa));
        for s in ["", "a", "aa", "ab", "aba", "abaa", "ba", "aab", "aaba"] {
            assert_eq!(back.accepts_str(s), fa.accepts_str(s), "{s:?}");
        }
    }
}
