use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use stree_core::automata::{embed_cta, embed_fa, embed_fa_vertical, run_accept, FiniteAutomaton};
use stree_core::grammar::{regex_to_nfa, Regex};
use stree_core::term::{term_encode, RankedTerm};
use stree_core::testkit::{ncfta_oracle, random_ncfta, random_regex, regex_matches};
use stree_core::{vertical_encode, StringTree};

fn regexes(seed: u64, n: usize) -> Vec<Regex<char>> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let depth = rng.gen_range(1..=4);
            random_regex(&mut rng, &['a', 'b'], depth)
        })
        .collect()
}

fn words(max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut frontier = vec![String::new()];
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|w| ['a', 'b'].map(|c| format!("{w}{c}")))
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

fn fa_of(r: &Regex<char>) -> FiniteAutomaton {
    let mut fa = regex_to_nfa(r);
    fa.alphabet = ['a', 'b'].into();
    fa
}

#[test]
fn horizontal_embedding_reads_single_labels() {
    let multi: Vec<StringTree> = StringTree::enumerate(&BTreeSet::from(['a', 'b']), 5)
        .into_iter()
        .filter(|t| t.label_count() > 1)
        .collect();
    for r in regexes(21, 50) {
        let a = embed_fa(&fa_of(&r));
        for w in words(6) {
            let chars: Vec<char> = w.chars().collect();
            assert_eq!(
                run_accept(&a, &StringTree::leaf(&w)).unwrap(),
                regex_matches(&r, &chars),
                "{r} on {w:?}"
            );
        }
        for t in &multi {
            assert!(!run_accept(&a, t).unwrap(), "{r} accepted {t}");
        }
    }
}

#[test]
fn vertical_embedding_accepts_exactly_the_encodings() {
    let trees = StringTree::enumerate(&BTreeSet::from(['a', 'b']), 7);
    for r in regexes(22, 15) {
        let a = embed_fa_vertical(&fa_of(&r));
        let accepted: BTreeSet<StringTree> = trees
            .iter()
            .filter(|t| run_accept(&a, t).unwrap())
            .cloned()
            .collect();
        let expected: BTreeSet<StringTree> = words(3)
            .into_iter()
            .filter(|w| regex_matches(&r, &w.chars().collect::<Vec<_>>()))
            .map(|w| vertical_encode(&w))
            .collect();
        assert_eq!(accepted, expected, "{r}");
    }
}

#[test]
fn term_embedding_agrees_with_bottom_up_evaluation() {
    let mut rng = StdRng::seed_from_u64(23);
    for _ in 0..20 {
        let c = random_ncfta(&mut rng);
        let a = embed_cta(&c);
        let terms = RankedTerm::enumerate(&c.signature, 3);
        assert!(!terms.is_empty());
        for t in &terms {
            let expected = ncfta_oracle(&c, t);
            assert_eq!(c.accepts(t), expected, "{t}");
            assert_eq!(run_accept(&a, &term_encode(t)).unwrap(), expected, "{t} {c:?}");
        }
    }
}
