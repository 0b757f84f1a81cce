mod common;

use rand::rngs::StdRng;
use rand::SeedableRng;
use stree_core::automata::{example_single_letter, parse_fsta, run_accept, write_fsta};
use stree_core::testkit::random_tree;

use common::{fixtures, replay, stdout, stree, transcript};

#[test]
fn golden_transcripts() {
    let cases = transcript();
    assert!(cases.len() >= 30);
    for case in cases {
        let (seen, code) = replay(&case);
        assert_eq!(seen, case.expected, "$ {}", case.command);
        assert_eq!(code, Some(case.code), "$ {}", case.command);
    }
}

#[test]
fn shipped_example_is_the_library_example() {
    let text = std::fs::read_to_string(fixtures().join("example6.fsta")).unwrap();
    assert_eq!(
        write_fsta(&parse_fsta(&text).unwrap()),
        write_fsta(&example_single_letter())
    );
}

#[test]
fn unbalanced_input_is_a_usage_error() {
    let out = stree(&["parse", "<a<b"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unbalanced brackets"));
    assert!(out.stdout.is_empty());
}

#[test]
fn trees_come_from_arguments_files_or_stdin() {
    let inline = stree(&["reduce", "<a<b>c>"], None);
    let piped = stree(&["reduce"], Some("<a<b>c>\n"));
    let dir = std::env::temp_dir().join(format!("stree-input-{}", std::process::id()));
    std::fs::write(&dir, "<a<b>c>\n").unwrap();
    let file = stree(&["reduce", "-f", dir.to_str().unwrap()], None);
    std::fs::remove_file(&dir).unwrap();
    for o in [&inline, &piped, &file] {
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(o), "<ac<b>>\n");
    }
}

#[test]
fn parse_reduce_accept_pipeline_matches_the_library() {
    let a = example_single_letter();
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..50 {
        let t = random_tree(&mut rng, &['a', 'b'], 7);
        let parsed = stree(&["parse"], Some(&t.serialize()));
        assert_eq!(stdout(&parsed), format!("{t}\n"));
        let reduced = stree(&["reduce"], Some(&stdout(&parsed)));
        assert_eq!(stdout(&reduced), format!("{}\n", t.reduce()));
        let verdict = stree(&["accept", "example6.fsta"], Some(&stdout(&reduced)));
        let expected = run_accept(&a, &t.reduce()).unwrap();
        assert_eq!(verdict.status.code(), Some(if expected { 0 } else { 1 }), "{t}");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["transform", "swap.rules", "<x<p><q><r>>"][..],
        &["determinize", "example6.fsta"],
        &["g2a", "single_letter.rstg"],
        &["a2g", "example6.fsta"],
        &["generate", "single_letter.rstg", "--max-nodes", "6"],
    ] {
        let first = stree(args, None);
        for _ in 0..3 {
            assert_eq!(stree(args, None).stdout, first.stdout, "{args:?}");
        }
    }
}
