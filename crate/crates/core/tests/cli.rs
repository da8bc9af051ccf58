//! End-to-end checks of the command-line interface: exit codes, key=value
//! output, and CSV emission.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hawking-teleport"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn point_prints_key_value_lines() {
    let out = run(&[
        "point", "--t", "10", "--theta", "0", "--delta", "0", "--p", "0", "--q", "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("fidelity=0.762489593739"), "got: {text}");
    assert!(text.contains("success_probability=1.00000000000"), "got: {text}");
    assert!(text.contains("concurrence=0.724554475163"), "got: {text}");
}

#[test]
fn point_with_policy_resolves_the_strength() {
    let out = run(&[
        "point", "--t", "10", "--theta", "1.3", "--delta", "0.4", "--p", "0.5", "--q-policy",
        "type1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("fidelity="));
    assert!(text.contains("success_probability=0.293661598764"), "got: {text}");
}

#[test]
fn point_requires_exactly_one_post_strength_choice() {
    let both = run(&[
        "point", "--t", "1", "--theta", "0", "--delta", "0", "--p", "0", "--q", "0",
        "--q-policy", "type1",
    ]);
    assert_eq!(both.status.code(), Some(2));
    let neither = run(&["point", "--t", "1", "--theta", "0", "--delta", "0", "--p", "0"]);
    assert_eq!(neither.status.code(), Some(2));
}

#[test]
fn argument_errors_exit_with_two() {
    assert_eq!(run(&["point", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    // out-of-range strength is an argument problem
    let out = run(&[
        "point", "--t", "1", "--theta", "0", "--delta", "0", "--p", "1.5", "--q", "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // degenerate combination p = 1 with an optimal policy
    let out = run(&[
        "point", "--t", "1", "--theta", "0", "--delta", "0", "--p", "1", "--q-policy", "type2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // negative temperature
    let out = run(&[
        "point", "--t", "-3", "--theta", "0", "--delta", "0", "--p", "0", "--q", "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["sweep", "--help"]).status.code(), Some(0));
}

#[test]
fn sweep_writes_the_expected_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = run(&[
        "sweep", "--t-min", "0.1", "--t-max", "5", "--t-steps", "10", "--p", "0,0.5",
        "--q-policy", "type1", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,p,q,F_av,P,C");
    assert_eq!(lines.len(), 1 + 10 * 2);
    // deterministic re-run
    let path2 = dir.path().join("sweep2.csv");
    let out = run(&[
        "sweep", "--t-min", "0.1", "--t-max", "5", "--t-steps", "10", "--p", "0,0.5",
        "--q-policy", "type1", "--out", path2.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&path2).unwrap());
}

#[test]
fn sweep_rejects_bad_policy_or_strengths() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("never.csv");
    let out = run(&[
        "sweep", "--p", "0", "--q-policy", "sideways", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "sweep", "--p", "1.0", "--q-policy", "type1", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!path.exists());
}

#[test]
fn grid_writes_improvements_with_a_baseline_note() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let out = run(&[
        "grid", "--t", "10", "--resolution", "11", "--baseline", "paper", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    let comment = lines.next().unwrap();
    assert!(comment.starts_with("# "), "got: {comment}");
    assert!(comment.contains("baseline=paper"));
    assert_eq!(lines.next().unwrap(), "p,q,C_imp,F_imp");
    assert_eq!(text.lines().count(), 2 + 11 * 11);
}

#[test]
fn runtime_errors_exit_with_one() {
    let out = run(&[
        "sweep", "--p", "0", "--q-policy", "type1", "--out", "/nonexistent-dir/file.csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("/nonexistent-dir/file.csv"), "stderr: {err}");
}
