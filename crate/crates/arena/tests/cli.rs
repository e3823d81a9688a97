mod common;

use std::fs;
use std::process::{Command, Output};

use common::desk;

fn arena(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_arena"))
        .args(args)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "arena {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn text(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn judge_prints_a_judgement() {
    let contest = desk();
    let src = desk().join("solutions/b1_wrong.py");
    let out = arena(&[
        "judge",
        "--contest",
        contest.to_str().unwrap(),
        "--problem",
        "b1",
        "--language",
        "python3",
        src.to_str().unwrap(),
    ]);
    let v: serde_json::Value = serde_json::from_str(&text(&out)).unwrap();
    assert_eq!(v["result"]["verdict"], "WA");
    assert_eq!(v["result"]["passed"], 4);
}

#[test]
fn hint_reports_its_cost() {
    let contest = desk();
    let out = arena(&[
        "hint",
        "--contest",
        contest.to_str().unwrap(),
        "--level",
        "0",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text(&out)).unwrap();
    assert_eq!(v["cost"], 500);
}

#[test]
fn run_writes_a_replayable_log() {
    let dir = tempfile::tempdir().unwrap();
    let contest = desk();
    let agents = desk().join("agents.json");
    let out = arena(&[
        "run",
        "--contest",
        contest.to_str().unwrap(),
        "--agents-file",
        agents.to_str().unwrap(),
        "--agent",
        "scripted:easy",
        "--agent",
        "scripted:quitter",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    let stdout = text(&out);
    assert!(stdout.contains("1. easy: Score 5"), "{stdout}");
    // the quitter never solves the qualification problem
    assert!(!stdout.contains("quitter"), "{stdout}");
    let logs: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(logs.len(), 1);
    assert!(logs[0]
        .file_name()
        .unwrap()
        .to_str()
        .unwrap()
        .starts_with("match-"));
    let replayed = text(&arena(&["replay", logs[0].to_str().unwrap()]));
    assert!(replayed.contains("footer reproduced"));

    let csv = dir.path().join("profile.csv");
    let profiled = text(&arena(&[
        "profile",
        logs[0].to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]));
    assert!(profiled.contains("attempted_definition"));
    let table = fs::read_to_string(csv).unwrap();
    assert!(
        table
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("easy,4,4,4,1,1,1,"),
        "{table}"
    );
}

#[test]
fn ablate_writes_the_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let out_csv = dir.path().join("grid.csv");
    let grid = desk().join("grid.json");
    arena(&[
        "ablate",
        "--grid",
        grid.to_str().unwrap(),
        "--out",
        out_csv.to_str().unwrap(),
    ]);
    let csv = fs::read_to_string(out_csv).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "participant,low-credit-10M,default-20M,high-credit-40M,flat-weights,exp-weights"
    );
    assert!(csv.contains("greedy,7,19,54,8,233"), "{csv}");
}

#[test]
fn serve_speaks_the_protocol_over_stdio() {
    use std::io::Write;
    let contest = desk();
    let mut child = Command::new(env!("CARGO_BIN_EXE_arena"))
        .args([
            "serve",
            "--contest",
            contest.to_str().unwrap(),
            "--transport",
            "stdio",
        ])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    let mut stdin = child.stdin.take().unwrap();
    writeln!(stdin, r#"{{"type": "hello", "name": "cli"}}"#).unwrap();
    writeln!(stdin, r#"{{"action": "TERMINATE", "parameters": {{}}}}"#).unwrap();
    drop(stdin);
    let out = child.wait_with_output().unwrap();
    let lines: Vec<serde_json::Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.first().unwrap()["type"], "state");
    assert_eq!(lines.last().unwrap()["type"], "end");
}

#[test]
fn bad_arguments_fail_cleanly() {
    let out = Command::new(env!("CARGO_BIN_EXE_arena"))
        .args([
            "judge",
            "--contest",
            "/nonexistent",
            "--problem",
            "b1",
            "--language",
            "python3",
            "x.py",
        ])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("loading"));
}
