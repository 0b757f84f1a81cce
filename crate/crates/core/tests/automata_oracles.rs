use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::SeedableRng;
use stree_core::automata::{
    bool_complement, bool_intersect, bool_union, brute_force_accept, brute_force_accept_leftmost,
    complete, determinize, example_single_letter, parse_fsta, run_accept, successors,
    to_pure_states, trace_length, trace_run, write_fsta, Flavour, Fsta,
};
use stree_core::testkit::{random_gnfsta, random_tree, single_letter_oracle};
use stree_core::StringTree;

fn trees(max: usize) -> Vec<StringTree> {
    StringTree::enumerate(&BTreeSet::from(['a', 'b']), max)
}

fn automata(seed: u64, n: usize) -> Vec<Fsta> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n).map(|_| random_gnfsta(&mut rng)).collect()
}

#[test]
fn simulation_agrees_with_exhaustive_search() {
    let ts = trees(6);
    for a in automata(11, 40) {
        for t in &ts {
            let expected = brute_force_accept(&a, t).unwrap();
            assert_eq!(
                run_accept(&a, t).unwrap(),
                expected,
                "{t}\n{}",
                write_fsta(&a)
            );
        }
    }
}

#[test]
fn leftmost_runs_decide_acceptance() {
    let ts = trees(5);
    for a in automata(12, 40) {
        for t in &ts {
            assert_eq!(
                brute_force_accept_leftmost(&a, t).unwrap(),
                brute_force_accept(&a, t).unwrap(),
                "{t}\n{}",
                write_fsta(&a)
            );
        }
    }
}

#[test]
fn purification_keeps_the_language_and_is_pure() {
    let ts = trees(6);
    for a in automata(13, 40) {
        let p = to_pure_states(&a);
        assert!(p.has_pure_states());
        assert_eq!(p.flavour(), a.flavour());
        for t in &ts {
            assert_eq!(
                run_accept(&p, t).unwrap(),
                run_accept(&a, t).unwrap(),
                "{t}"
            );
        }
    }
}

#[test]
fn determinization_is_sound_and_deterministic() {
    let ts = trees(6);
    for a in automata(14, 40) {
        let d = determinize(&to_pure_states(&a));
        assert_eq!(d.flavour(), Flavour::Deterministic);
        let c = complete(&d).unwrap();
        assert!(c.is_complete());
        for t in &ts {
            let expected = brute_force_accept(&a, t).unwrap();
            assert_eq!(
                run_accept(&d, t).unwrap(),
                expected,
                "{t}\n{}",
                write_fsta(&a)
            );
            assert_eq!(run_accept(&c, t).unwrap(), expected, "{t}");
        }
    }
}

#[test]
fn boolean_operations_are_pointwise() {
    let ts = trees(5);
    let pool = automata(15, 24);
    for pair in pool.chunks(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let u = bool_union(a, b).unwrap();
        let i = bool_intersect(a, b).unwrap();
        let na = bool_complement(a).unwrap();
        let nb = bool_complement(b).unwrap();
        let nna = bool_complement(&na).unwrap();
        let de_morgan = bool_complement(&bool_union(&na, &nb).unwrap()).unwrap();
        for t in &ts {
            let (x, y) = (
                brute_force_accept(a, t).unwrap(),
                brute_force_accept(b, t).unwrap(),
            );
            assert_eq!(run_accept(&u, t).unwrap(), x || y, "union {t}");
            assert_eq!(run_accept(&i, t).unwrap(), x && y, "intersection {t}");
            assert_eq!(run_accept(&na, t).unwrap(), !x, "complement {t}");
            assert_eq!(run_accept(&nna, t).unwrap(), x, "double complement {t}");
            assert_eq!(run_accept(&de_morgan, t).unwrap(), x && y, "de morgan {t}");
        }
    }
}

#[test]
fn example_automaton_language() {
    let a = example_single_letter();
    for t in trees(6) {
        assert_eq!(run_accept(&a, &t).unwrap(), single_letter_oracle(&t), "{t}");
    }
}

#[test]
fn text_format_round_trips() {
    for a in automata(16, 30) {
        let text = write_fsta(&a);
        let back = parse_fsta(&text).unwrap();
        assert_eq!(write_fsta(&back), text);
    }
}

#[test]
fn traces_have_the_predicted_length() {
    let a = example_single_letter();
    for t in trees(6).into_iter().filter(single_letter_oracle) {
        let trace = trace_run(&a, &t, 1000).unwrap().expect("accepted");
        assert_eq!(trace.steps.len(), trace_length(&t), "{t}");
        let mut current = trace.start.clone();
        for step in &trace.steps {
            assert!(
                successors(&a, &current)
                    .iter()
                    .any(|(k, next)| *k == step.kind && *next == step.tree),
                "{t}: illegal step"
            );
            current = step.tree.clone();
        }
        assert!(current.finished_state().is_some_and(|q| a.is_final(q)));
    }
}

#[test]
fn determinization_on_larger_random_trees() {
    let mut rng = StdRng::seed_from_u64(17);
    for a in automata(18, 40) {
        let d = determinize(&to_pure_states(&a));
        for _ in 0..50 {
            let t = random_tree(&mut rng, &['a', 'b'], 14);
            assert_eq!(
                run_accept(&d, &t).unwrap(),
                run_accept(&a, &t).unwrap(),
                "{t}"
            );
        }
    }
}
