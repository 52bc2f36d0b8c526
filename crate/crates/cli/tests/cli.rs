use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn geodom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geodom")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_verdicts() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("interval 0/1 1/1\n", "HasInterval\n"),
        ("point 0/1\npoint 2/1\npoint 3/1\n", "RationalPoints\n"),
        ("point 0/1\npoint 1/1\npoint 0/1+1/1*sqrt(2)\n", "IrrationalPoints ratio sqrt(2)\n"),
    ];
    for (i, (text, want)) in cases.iter().enumerate() {
        let p = write(&dir, &format!("p{i}"), text);
        let out = geodom(&["classify", "--pattern", s(&p)]);
        assert!(out.status.success());
        assert_eq!(stdout(&out), *want);
    }
}

#[test]
fn parse_error_exit_code_and_position() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p", "point 0\nsegment 1 2\n");
    let out = geodom(&["classify", "--pattern", s(&p)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2, column 1"), "{err}");
}

#[test]
fn solve_1d_path() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "p5", "interval 0 1\ntranslate 0\ntranslate 1\ntranslate 2\ntranslate 3\ntranslate 4\n");
    let out = geodom(&["solve-1d", "--instance", s(&inst)]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("size 2\n"));
    let out = geodom(&["solve-1d", "--instance", s(&inst), "--k", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn solve_1d_separate_pattern_and_branching() {
    let dir = TempDir::new().unwrap();
    let pat = write(&dir, "pat", "point 0\npoint 1\npoint sqrt(2)\n");
    let inst = write(&dir, "xs", "translate 0\ntranslate 1\ntranslate sqrt(2)\ntranslate 5\n");
    let out = geodom(&["solve-1d", "--pattern", s(&pat), "--instance", s(&inst), "--algo", "branch", "--k", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out), "size 2\nwitness 0 3\n");
    let out = geodom(&["solve-1d", "--pattern", s(&pat), "--instance", s(&inst), "--algo", "branch", "--k", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn disk_solve_collinear() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "d", "disk 0 0\ndisk 2 0\ndisk 4 0\n");
    let out = geodom(&["disk-solve", "--instance", s(&inst), "--k", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "size 1\nwitness 1\n");
    let out = geodom(&["disk-solve", "--instance", s(&inst), "--mode", "check", "--set", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "covered 2 of 3\ndominating no\n");
    let out = geodom(&["disk-solve", "--instance", s(&inst), "--mode", "check", "--set", "7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn squarelike_prints_certificate() {
    let dir = TempDir::new().unwrap();
    let poly = write(&dir, "sq", "poly 4\nv 0 0\nv 1 0\nv 1 1\nv 0 1\n");
    let out = geodom(&["squarelike", "--poly", s(&poly), "--n", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for i in 1..=4 {
        assert!(text.contains(&format!("property {i} PASS")), "{text}");
    }
}

#[test]
fn generators_reverify() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "g", "n 4\ne 0 1\ne 1 2\ne 0 3\n");
    let inst = dir.path().join("u.inst");
    assert!(geodom(&["gen-universal", "--graph", s(&graph), "--out", s(&inst)]).status.success());
    assert!(geodom(&["verify", "--universal", s(&inst), "--graph", s(&graph)]).status.success());
    let other = write(&dir, "g2", "n 4\ne 0 1\n");
    assert_eq!(geodom(&["verify", "--universal", s(&inst), "--graph", s(&other)]).status.code(), Some(1));

    let pat = write(&dir, "t", "point 0\npoint 1\npoint sqrt(2)\n");
    let grid = dir.path().join("t.inst");
    assert!(geodom(&["gen-trigrid", "--pattern", s(&pat), "--radius", "2", "--out", s(&grid)]).status.success());
    assert!(geodom(&["verify", "--trigrid", s(&grid)]).status.success());

    let poly = write(&dir, "sq", "poly 4\nv 0 0\nv 1 0\nv 1 1\nv 0 1\n");
    let gt = write(&dir, "gt", "gt 1 1\ncell 1 1: (1,1)\n");
    let gadget = dir.path().join("g.gad");
    assert!(geodom(&["gen-gadget", "--gridtiling", s(&gt), "--poly", s(&poly), "--out", s(&gadget)]).status.success());
    let out = geodom(&["verify", "--gadget", s(&gadget)]);
    assert!(out.status.success());
    assert!(stdout(&out).ends_with("PASS\n"));

    let split = write(&dir, "s", "split 2 3\ne 0 2\ne 1 4\n");
    let polys = dir.path().join("s.out");
    assert!(geodom(&["gen-splitpoly", "--split", s(&split), "--out", s(&polys)]).status.success());
    assert!(geodom(&["verify", "--splitpoly", s(&polys)]).status.success());
}

#[test]
fn generator_stdout_is_deterministic_and_parseable() {
    let dir = TempDir::new().unwrap();
    let split = write(&dir, "s", "split 1 4\ne 0 1\ne 0 3\n");
    let a = geodom(&["gen-splitpoly", "--split", s(&split)]);
    let b = geodom(&["gen-splitpoly", "--split", s(&split)]);
    assert_eq!(a.stdout, b.stdout);
    let saved = write(&dir, "s.out", &stdout(&a));
    assert!(geodom(&["verify", "--splitpoly", s(&saved)]).status.success());
}

#[test]
fn run_report_payload_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "d", "disk 0 0\ndisk 2 0\ndisk 4 0\n");
    let mut payloads = Vec::new();
    for i in 0..2 {
        let report = dir.path().join(format!("r{i}.json"));
        let out = geodom(&["disk-solve", "--instance", s(&inst), "--report", s(&report)]);
        assert!(out.status.success());
        let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
        assert_eq!(v["command"], "disk-solve");
        assert_eq!(v["result"]["witness"], serde_json::json!([1]));
        assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
        v.as_object_mut().unwrap().remove("wall_time_ms");
        payloads.push(v);
    }
    assert_eq!(payloads[0], payloads[1]);
}

#[test]
fn help_documents_formats() {
    let out = geodom(&["--help"]);
    let text = stdout(&out);
    for needle in ["gt <k> <n>", "disk <x> <y>", "split <c> <i>", "translate <v>", "poly <k>"] {
        assert!(text.contains(needle), "missing {needle}");
    }
}

#[test]
fn verify_needs_a_target() {
    assert_eq!(geodom(&["verify"]).status.code(), Some(2));
}
