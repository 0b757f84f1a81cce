use std::collections::BTreeSet;

use proptest::prelude::*;
use stree_core::{parse_tree, vertical_encode, Item, StringTree};

fn tree() -> impl Strategy<Value = StringTree> {
    let leaf = prop::collection::vec(
        prop::sample::select(vec!['a', 'b', 'x', '<', '\\', ' ']),
        0..3,
    )
    .prop_map(|cs| StringTree::from_items(cs.into_iter().map(Item::Symbol).collect()));
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop::collection::vec(
            prop_oneof![
                prop::sample::select(vec!['a', 'b', 'x']).prop_map(Item::Symbol),
                inner.prop_map(Item::Child),
            ],
            0..4,
        )
        .prop_map(StringTree::from_items)
    })
}

proptest! {
    #[test]
    fn serialization_round_trips(t in tree()) {
        prop_assert_eq!(parse_tree(&t.serialize()).unwrap(), t);
    }

    #[test]
    fn concat_is_a_monoid(u in tree(), v in tree(), w in tree()) {
        prop_assert_eq!(u.concat(&v).concat(&w), u.concat(&v.concat(&w)));
        prop_assert_eq!(StringTree::null().concat(&u), u.clone());
        prop_assert_eq!(u.concat(&StringTree::null()), u);
    }

    #[test]
    fn reduce_is_an_idempotent_homomorphism(u in tree(), v in tree()) {
        prop_assert_eq!(u.concat(&v).reduce(), u.reduce().concat(&v.reduce()).reduce());
        prop_assert_eq!(u.reduce().reduce(), u.reduce());
        prop_assert!(u.reduce().is_reduced());
    }

    #[test]
    fn vertical_concat_follows_its_recursive_definition(u in tree(), v in tree(), t in tree()) {
        let x = 'x';
        prop_assert_eq!(StringTree::null().vertical_concat(x, &t), StringTree::null());
        prop_assert_eq!(
            u.concat(&v).vertical_concat(x, &t),
            u.vertical_concat(x, &t).concat(&v.vertical_concat(x, &t))
        );
        prop_assert_eq!(StringTree::leaf("a").vertical_concat(x, &t), StringTree::leaf("a"));
        prop_assert_eq!(u.encapsulate().vertical_concat(x, &t), u.vertical_concat(x, &t).encapsulate());
        prop_assert_eq!(StringTree::leaf("x").vertical_concat(x, &t), t.encapsulate());
        prop_assert!(!u.vertical_concat(x, &t).symbols().contains(&x) || t.symbols().contains(&x));
    }
}

#[test]
fn vertical_concat_on_small_enumerations() {
    let alphabet: BTreeSet<char> = ['a', 'x'].into();
    let trees = StringTree::enumerate(&alphabet, 4);
    for u in &trees {
        for t in &trees {
            for v in &trees {
                assert_eq!(
                    u.concat(v).vertical_concat('x', t),
                    u.vertical_concat('x', t).concat(&v.vertical_concat('x', t))
                );
            }
            assert_eq!(
                u.encapsulate().vertical_concat('x', t),
                u.vertical_concat('x', t).encapsulate()
            );
        }
    }
}

#[test]
fn vertical_encoding_is_injective() {
    let mut seen = BTreeSet::new();
    let mut words = vec![String::new()];
    for _ in 0..8 {
        let next: Vec<String> = words
            .iter()
            .flat_map(|w| ['a', 'b'].map(|c| format!("{w}{c}")))
            .collect();
        for w in &words {
            assert!(seen.insert(vertical_encode(w)), "{w:?}");
        }
        words = next;
    }
    for w in &words {
        assert!(seen.insert(vertical_encode(w)), "{w:?}");
    }
    assert_eq!(seen.len(), (1 << 9) - 1);
}

#[test]
fn enumeration_matches_a_counting_recurrence() {
    // t(n): trees of size n; s(n): item sequences of total size n
    let k = 2u64;
    let mut t = vec![0u64; 8];
    let mut s = vec![0u64; 8];
    s[0] = 1;
    for n in 1..8 {
        t[n] = s[n - 1];
        s[n] = (1..=n)
            .map(|first| (if first == 1 { k } else { 0 } + t[first]) * s[n - first])
            .sum();
    }
    let alphabet: BTreeSet<char> = ['a', 'b'].into();
    let trees = StringTree::enumerate(&alphabet, 7);
    for n in 1..8 {
        let count = trees.iter().filter(|x| x.size() == n).count() as u64;
        assert_eq!(count, t[n], "size {n}");
    }
    let distinct: BTreeSet<_> = trees.iter().collect();
    assert_eq!(distinct.len(), trees.len());
}
