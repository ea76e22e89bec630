//! End-to-end behaviour of the `qspb` binary: exit codes, JSON lines and
//! the expression evaluator.

use std::process::{Command, Output};

fn qspb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qspb")).args(args).output().expect("qspb runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_emits_one_json_object_per_check() {
    let out = qspb(&["verify", "--n", "3", "--r", "1", "--suite", "uq-defining", "--jobs", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let lines: Vec<serde_json::Value> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!lines.is_empty());
    for v in &lines {
        for key in ["check_id", "suite", "paper_anchor", "status", "elapsed_ms", "oracles"] {
            assert!(v.get(key).is_some(), "missing {key} in {v}");
        }
        assert_eq!(v["suite"], "uq-defining");
        assert_eq!(v["status"], "pass");
    }
}

#[test]
fn verify_output_is_deterministic_up_to_timing() {
    let run = || {
        let out = qspb(&["verify", "--n", "3", "--r", "1", "--suite", "qsp-defining", "--jobs", "2"]);
        assert_eq!(out.status.code(), Some(0));
        stdout(&out)
            .lines()
            .map(|l| {
                let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
                v.as_object_mut().unwrap().remove("elapsed_ms");
                v.to_string()
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}

#[test]
fn summary_goes_to_stderr_and_json_to_a_file() {
    let path = std::env::temp_dir().join(format!("qspb-cli-{}.jsonl", std::process::id()));
    let p = path.to_str().unwrap();
    let out = qspb(&["verify", "--n", "3", "--r", "1", "--suite", "lusztig", "--json", p, "--summary"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("lusztig") && err.contains("pass"), "{err}");
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(written.lines().count() > 0);
}

#[test]
fn skipped_checks_do_not_fail_the_run() {
    // r = 1 has no restricted braid operators to compare.
    let out = qspb(&["verify", "--n", "3", "--r", "1", "--suite", "braid"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).lines().all(|l| l.contains("\"skipped\"")));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["verify", "--n", "4", "--r", "2"][..],
        &["verify", "--n", "5", "--r", "2", "--suite", "nonsense"],
        &["verify", "--n", "5", "--r", "2", "--oracle", "nonsense"],
        &["verify", "--n", "5"],
        &["eval", "--n", "5", "--r", "2", "E[1] +* F[1]"],
    ] {
        assert_eq!(qspb(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn eval_prints_normal_forms() {
    let out = qspb(&["eval", "--n", "5", "--r", "2", "K[w[1]]*K[w[1]] - K[(2,0,0,0,0)]"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "0");
    let out = qspb(&["eval", "--n", "3", "--r", "1", "E[1]*F[1] - F[1]*E[1]"]);
    assert_eq!(out.status.code(), Some(0));
    assert_ne!(stdout(&out).trim(), "0");
}

#[test]
fn parse_errors_point_at_the_offending_column() {
    let out = qspb(&["eval", "--n", "5", "--r", "2", "E[1] + F[9]"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    let caret_line = err.lines().nth(1).unwrap();
    assert_eq!(caret_line.find('^'), Some(2 + "E[1] + F[".len()), "{err}");
}
