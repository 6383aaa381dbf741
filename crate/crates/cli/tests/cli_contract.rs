//! Contract tests for the binary itself: exit codes carry the verdict,
//! reports are byte-identical across runs, and malformed input never panics.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sepinv"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        vec!["reflections", "--scene", &fixture("two_planes_f7.json")],
        vec!["vsep-graph", "--scene", &fixture("two_planes_f7.json")],
        vec!["gamma-bound", "--scene", &fixture("hypersurface_f7.json")],
        vec!["molien", "--scene", &fixture("cusp_f7.json"), "--terms", "6"],
        vec!["gb", "--ideal", &fixture("threefold_q.ideal"), "--order", "lex"],
        vec![
            "crosscheck-connectedness",
            "--scene",
            &fixture("two_planes_f7.json"),
        ],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?} output is not deterministic");
        assert!(!a.stdout.is_empty(), "{args:?} produced no report");
    }
}

#[test]
fn refutation_exits_one_with_witness() {
    let out = run(&[
        "check-separating",
        "--scene",
        &fixture("char2_order8.json"),
        "--method",
        "points",
        "--candidates",
        &fixture("char2_candidates_f1f2.txt"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("verdict: refuted"), "{text}");
    assert!(text.contains("certificate:"), "{text}");
}

#[test]
fn affirmative_verdicts_exit_zero() {
    let out = run(&[
        "check-separating",
        "--scene",
        &fixture("char2_order8.json"),
        "--method",
        "groebner",
        "--candidates",
        &fixture("char2_candidates_S.txt"),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verdict: separating"));
}

#[test]
fn malformed_input_exits_three_without_panic() {
    let missing = run(&["reflections", "--scene", "/nonexistent/scene.json"]);
    assert_eq!(missing.status.code(), Some(3));
    assert!(missing.stdout.is_empty(), "error paths must keep stdout empty");

    let modular = run(&["molien", "--scene", &fixture("char2_order8.json")]);
    assert_eq!(modular.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&modular.stderr).contains("modular"));
}

#[test]
fn resource_caps_exit_four() {
    // a one-term-op budget forces the basis computation to give up
    let out = run(&[
        "--max-term-ops",
        "1",
        "gb",
        "--ideal",
        &fixture("threefold_q.ideal"),
    ]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn output_flag_writes_the_report_file() {
    let dir = std::env::temp_dir().join("sepinv-cli-contract");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("graph.dot");
    let out = run(&[
        "vsep-graph",
        "--scene",
        &fixture("two_planes_f7.json"),
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty(), "--output must silence stdout");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("graph vsep {"), "{text}");
    std::fs::remove_file(&path).ok();
}

#[test]
fn inconclusive_groebner_suggests_the_points_method() {
    // the same scene verified under a tiny budget: the verdict must degrade
    // to inconclusive (exit 2) and point at the fallback, never to a wrong
    // affirmative or negative
    let out = run(&[
        "--max-term-ops",
        "1",
        "check-separating",
        "--scene",
        &fixture("char2_order8.json"),
        "--method",
        "groebner",
        "--candidates",
        &fixture("char2_candidates_S.txt"),
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("verdict: inconclusive"), "{text}");
    assert!(text.contains("points"), "inconclusive report must suggest the points method: {text}");
}
