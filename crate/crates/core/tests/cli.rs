use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use scdkit::constructions::generate;
use scdkit::data_io::{builtin_document, render_pictorial, serialize_scd, BuiltinTableId};
use scdkit::build_hypercube;

fn scdkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scdkit"))
        .args(args)
        .env_remove("SCDKIT_NODE_BUDGET")
        .output()
        .expect("binary runs")
}

fn scdkit_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_scdkit"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("scdkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn table_pipes_into_validate() {
    let table = scdkit(&["tables", "--id", "P53"]);
    assert!(table.status.success());
    let out = scdkit_stdin(&["validate", "--require-nontaut"], &stdout(&table));
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("25 chains, 0 taut"));
}

#[test]
fn tables_match_library() {
    for id in BuiltinTableId::ALL {
        let out = scdkit(&["tables", "--id", &id.to_string()]);
        assert_eq!(stdout(&out), builtin_document(id).to_text());
    }
}

#[test]
fn generate_outside_region_fails() {
    let out = scdkit(&["generate", "--k", "4", "--n", "7"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("k <= 4"), "{err}");
    assert_eq!(err.trim().lines().count(), 1);
}

#[test]
fn generate_matches_library_and_is_deterministic() {
    let a = scdkit(&["generate", "--k", "6", "--n", "8"]);
    let b = scdkit(&["generate", "--k", "6", "--n", "8"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let built = generate(6, 8).unwrap();
    assert_eq!(stdout(&a), serialize_scd(&built.host, &built.scd, built.notes).unwrap());
}

#[test]
fn show_matches_renderer() {
    let out = scdkit(&["show", "--k", "4", "--n", "6"]);
    assert_eq!(stdout(&out), render_pictorial(&build_hypercube(4), 6));
}

#[test]
fn validate_reports_taut_chains() {
    let doc = "2 2\n000 001 011 111\n010 110\n100 101\n";
    let plain = scdkit_stdin(&["validate", "-"], doc);
    assert_eq!(plain.status.code(), Some(0));
    assert!(stdout(&plain).contains("valid: 3 chains, 2 taut"));
    let strict = scdkit_stdin(&["validate", "--require-nontaut"], doc);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn validate_rejects_bad_input() {
    let broken = scdkit_stdin(&["validate"], "5 3\n000000 100001\n");
    assert_eq!(broken.status.code(), Some(1));
    let garbage = scdkit_stdin(&["validate"], "hello\n");
    assert_eq!(garbage.status.code(), Some(1));
    let missing = scdkit(&["validate", "/nonexistent/file.txt"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8(missing.stderr).unwrap().contains("cannot read"));
}

#[test]
fn unknown_flags_fail() {
    assert_eq!(scdkit(&["show", "--k", "3", "--n", "2", "--bogus"]).status.code(), Some(1));
    assert_eq!(scdkit(&["tables", "--id", "P99"]).status.code(), Some(1));
}

#[test]
fn transform_pipeline() {
    let p55 = temp_path("p55.txt");
    let up = temp_path("p56.txt");
    let fixed = temp_path("p56r.txt");
    let far = temp_path("p59.txt");
    let s = |p: &PathBuf| p.to_str().unwrap().to_string();
    assert!(scdkit(&["tables", "--id", "P55", "--out", &s(&p55)]).status.success());
    assert!(scdkit(&["expand", "--file", &s(&p55), "--matching", "3", "--out", &s(&up)]).status.success());
    assert!(scdkit(&["repair", "--file", &s(&up), "--out", &s(&fixed)]).status.success());
    assert!(scdkit(&["shift", "--file", &s(&fixed), "--to", "9", "--out", &s(&far)]).status.success());
    for file in [&up, &fixed, &far] {
        let out = scdkit(&["validate", "--require-nontaut", &s(file)]);
        assert!(out.status.success(), "{}", stdout(&out));
    }
    let back = scdkit(&["collapse", "--file", &s(&up)]);
    let check = scdkit_stdin(&["validate", "--require-nontaut"], &stdout(&back));
    assert!(stdout(&check).contains("31 chains, 0 taut"));

    let lifted = scdkit(&["lift", "--file", &s(&p55), "--with-hypercube", "1"]);
    let check = scdkit_stdin(&["validate", "--require-nontaut"], &stdout(&lifted));
    assert!(check.status.success());
    assert!(stdout(&lifted).contains("\n6 5\n"));

    let bad = scdkit(&["expand", "--file", &s(&p55), "--matching", "6"]);
    assert_eq!(bad.status.code(), Some(1));
    let short = scdkit(&["shift", "--file", &s(&p55), "--to", "4"]);
    assert_eq!(short.status.code(), Some(1));
}

#[test]
fn search_statuses() {
    let done = scdkit(&["search", "--k", "2", "--n", "3", "--forbid-taut"]);
    assert_eq!(done.status.code(), Some(0));
    assert!(stdout(&done).starts_with("exhausted: 0 taut-free"));

    let capped = scdkit(&["search", "--k", "3", "--n", "3", "--budget", "100"]);
    assert_eq!(capped.status.code(), Some(2));
    assert!(stdout(&capped).starts_with("inconclusive"));

    let env_capped = Command::new(env!("CARGO_BIN_EXE_scdkit"))
        .args(["search", "--k", "3", "--n", "3"])
        .env("SCDKIT_NODE_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(env_capped.status.code(), Some(2));

    let limited = scdkit(&["search", "--k", "2", "--n", "2", "--limit", "1", "--print"]);
    assert_eq!(limited.status.code(), Some(0));
    let text = stdout(&limited);
    assert!(text.starts_with("2 2\n"));
    assert!(text.contains("limit reached: 1 SCDs"));

    let exists = scdkit(&["search", "--k", "1", "--n", "4", "--exists"]);
    assert!(stdout(&exists).contains("does not exist"));
    let fast = scdkit(&["search", "--k", "4", "--n", "9", "--exists"]);
    assert!(stdout(&fast).contains("does not exist"));
    let yes = scdkit(&["search", "--k", "5", "--n", "3", "--exists"]);
    assert!(stdout(&yes).contains("exists"));
}

#[test]
fn check_reports_conditions() {
    let four = stdout(&scdkit(&["check", "--k", "4"]));
    assert!(four.contains("[1, 4, 6, 4, 1]"));
    assert!(four.contains("no SCD of Q_4 x n is taut-free"));
    let five = stdout(&scdkit(&["check", "--k", "5"]));
    assert!(five.contains("necessary conditions hold"));
}
