use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use immunity::checkers::Verdict;
use immunity::report::Report;
use tempfile::TempDir;

fn immunity(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_immunity"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn build(dir: &TempDir, name: &str, extra: &[&str]) -> std::path::PathBuf {
    let out = dir.path().join(format!("{name}.txt"));
    let mut args = vec!["build", name, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = immunity(&args);
    assert!(
        o.status.success(),
        "{name}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    out
}

fn check(kind: &str, input: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["check", kind, "--input", input.to_str().unwrap()];
    args.extend_from_slice(extra);
    immunity(&args)
}

#[test]
fn delta2_builds_and_checks() {
    let dir = TempDir::new().unwrap();
    let report = build(&dir, "delta2", &["--stages", "2000", "--markers", "16"]);
    let o = check("immunity", &report, &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("pass"));
}

#[test]
fn every_passing_construction_checks_clean() {
    let dir = TempDir::new().unwrap();
    for (name, extra) in [
        ("bci", vec!["--stages", "200"]),
        ("cofinal", vec!["--bits", "0110"]),
        ("ci-not-hi", vec!["--stages", "100"]),
        ("effectivize", vec!["--stages", "40"]),
        ("generic", vec![]),
    ] {
        let report = build(&dir, name, &extra);
        let o = check("all", &report, &[]);
        assert!(
            o.status.success(),
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn hi_not_ci_fails_immunity_as_expected() {
    let dir = TempDir::new().unwrap();
    let report = build(&dir, "hi-not-ci", &["--blocks", "5"]);
    assert_eq!(check("immunity", &report, &[]).status.code(), Some(1));
    assert!(check("immunity", &report, &["--expect-fail"])
        .status
        .success());
}

#[test]
fn guard_names_the_failing_step() {
    let o = immunity(&["build", "generic", "--schedule", "size:1,avoid:2,inject:4"]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("inject"), "{err}");
}

#[test]
fn bad_flags_and_inputs_are_rejected() {
    assert!(!immunity(&["build", "bci", "--stages", "0"])
        .status
        .success());
    assert!(!immunity(&["build", "no-such-thing"]).status.success());
    let o = immunity(&["check", "all", "--input", "/nonexistent/report.txt"]);
    assert_eq!(o.status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let junk = dir.path().join("junk.txt");
    fs::write(&junk, "not a report\n").unwrap();
    assert_eq!(check("all", &junk, &[]).status.code(), Some(2));
}

#[test]
fn measure_prints_exact_values() {
    let o = immunity(&["measure", "1", "2"]);
    assert!(o.status.success());
    assert_eq!(
        String::from_utf8_lossy(&o.stdout).trim(),
        "1/2^2 ≤ 1/2^1: true"
    );
    let o = immunity(&["measure", "0", "1"]);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "1/2^1 ≤ 1: true");
    let o = immunity(&["measure", "1", "64"]);
    assert!(String::from_utf8_lossy(&o.stdout)
        .trim()
        .ends_with("≤ 1/2^1: true"));
    assert!(!immunity(&["measure", "2", "2"]).status.success());
}

#[test]
fn runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    for name in ["bci", "hi-not-ci", "generic", "2generic-witness"] {
        let a = fs::read(build(&dir, name, &[])).unwrap();
        let b = immunity(&["build", name]).stdout;
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn report_replays_through_the_library() {
    let dir = TempDir::new().unwrap();
    let report_path = build(&dir, "ci-not-hi", &["--stages", "100"]);
    let verdict_path = dir.path().join("verdicts.txt");
    let o = check(
        "all",
        &report_path,
        &["--out", verdict_path.to_str().unwrap()],
    );
    assert!(o.status.success());

    let text = fs::read_to_string(&report_path).unwrap();
    let report: Report = text.parse().unwrap();
    assert_eq!(report.to_string(), text);
    let mut expected: Vec<Verdict> = report.immunity_verdicts().unwrap();
    expected.extend(report.domination_verdicts().unwrap());
    expected.extend(report.effective_verdicts().unwrap());
    let written: String = expected.iter().map(Verdict::to_string).collect();
    assert_eq!(fs::read_to_string(&verdict_path).unwrap(), written);
}
