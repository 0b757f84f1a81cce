#![allow(dead_code)]

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn stree(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_stree"))
        .args(args)
        .current_dir(fixtures())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub struct Case {
    pub command: String,
    pub expected: String,
    pub code: i32,
}

pub fn transcript() -> Vec<Case> {
    let text = include_str!("../transcript.txt");
    let mut cases = Vec::new();
    let mut lines = text.lines();
    while let Some(head) = lines.next() {
        if head.is_empty() {
            continue;
        }
        let command = head.strip_prefix("$ ").expect("`$ ` prefix").to_string();
        let mut expected = String::new();
        let code = loop {
            let line = lines.next().expect("exit line");
            if let Some(code) = line.strip_prefix("[exit ").and_then(|c| c.strip_suffix(']')) {
                break code.parse().unwrap();
            }
            expected.push_str(line);
            expected.push('\n');
        };
        cases.push(Case {
            command,
            expected,
            code,
        });
    }
    cases
}

/// Replays one transcript entry; returns the combined output and exit code.
pub fn replay(case: &Case) -> (String, Option<i32>) {
    let args: Vec<&str> = case.command.split_whitespace().collect();
    let out = stree(&args, None);
    let mut seen = stdout(&out);
    seen.push_str(&String::from_utf8_lossy(&out.stderr));
    (seen, out.status.code())
}
