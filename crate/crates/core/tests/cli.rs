mod common;

use std::fs;
use std::process::{Command, Output};

use common::bin;

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn eval_prints_scalars() {
    let out = run(&["eval", "state(mu=0) | negativity"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1\n");
    let out = run(&["eval", "state(mu=0.5) | filter(part=qutrit, Q=0.81, mode=postselect) | negativity"]);
    assert_eq!(stdout(&out), "0.821917808219178\n");
}

#[test]
fn eval_dump() {
    let out = run(&["eval", "state(mu=0.5) | dump"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("dims=2x3\nreal:\n"));
    assert!(text.contains("\nimag:\n"));
}

#[test]
fn parse_errors_are_usage_errors() {
    let out = run(&["eval", "state(mu=0.7)"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("mu = 0.7 out of range [0, 0.5]"), "{err}");
    assert_eq!(run(&["eval", "negativity | state(mu=0)"]).status.code(), Some(2));
    assert_eq!(run(&["figure", "--id", "9", "--mu", "0"]).status.code(), Some(2));
    assert_eq!(run(&["figure", "--id", "1", "--mu", "0.9"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--mu", "0", "--accelerate", "qutrit", "--filter", "qubit"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn check_passes_and_reports_expected_discrepancy() {
    let out = run(&["check"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("EXPECTED-DISCREPANCY"));
    assert!(text.contains("gap 0.350000"));
    assert!(!text.contains(" FAIL "));
}

#[test]
fn sweep_to_stdout() {
    let args = [
        "sweep", "--mu", "0.25", "--accelerate", "qutrit", "--filter", "qutrit", "--strength", "0.5",
        "--mode", "channel", "--pair", "keep", "--steps", "5",
    ];
    let out = run(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 8);
    assert_eq!(
        lines[1],
        "# scenario: mu=0.25 accelerated=qutrit filter=qutrit strength-mode=channel pair=keep"
    );
    assert!(lines[3].starts_with("0,0.5,"));
    assert_eq!(text, stdout(&run(&args)));
}

#[test]
fn figure_writes_numbered_files() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("fig.csv");
    let svg = dir.path().join("fig.svg");
    let out = run(&[
        "figure", "--id", "1", "--mu", "0", "--out", base.to_str().unwrap(), "--svg", svg.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    for k in 1..=6 {
        let path = dir.path().join(format!("fig-{k:02}.csv"));
        let csv = fs::read_to_string(&path).unwrap();
        assert_eq!(csv.lines().count(), 3 + 101);
    }
    assert!(!dir.path().join("fig-07.csv").exists());
    assert_eq!(fs::read_to_string(svg).unwrap().matches("<polyline").count(), 6);
}
