//! End-to-end checks of the `bura` binary: exit codes, output shape and
//! reproducibility of the experiment reports.

use std::path::Path;
use std::process::{Command, Output};

fn bura(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bura"))
        .arg("--cache")
        .arg(cache)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn help_and_version_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(bura(dir.path(), &["--help"]).status.code(), Some(0));
    let v = bura(dir.path(), &["--version"]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).starts_with("bura "));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(bura(dir.path(), &["--bogus"]).status.code(), Some(1));
    assert_eq!(bura(dir.path(), &["compute"]).status.code(), Some(1));
    assert_eq!(bura(dir.path(), &["experiment", "nope"]).status.code(), Some(1));
    assert_eq!(bura(dir.path(), &["solve", "--alpha", "0.5", "--problem", "4d"]).status.code(), Some(1));
    assert_eq!(bura(dir.path(), &["compute", "--alpha", "1.5"]).status.code(), Some(1));
}

#[test]
fn double_precision_remez_fails_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = bura(dir.path(), &["compute", "--alpha", "0.75", "-k", "7", "--bits", "53"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no convergence"));
}

#[test]
fn io_errors_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.mtx");
    let o = bura(dir.path(), &["solve", "--alpha", "0.5", "--problem", &format!("mm:{}", missing.display())]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.mtx"));

    let file = dir.path().join("plain");
    std::fs::write(&file, "x").unwrap();
    let out = file.join("reports");
    let o = bura(
        dir.path(),
        &["experiment", "multistep-1d", "--sizes", "8", "--degrees", "5", "--trials", "2", "--out", out.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn compute_prints_error_and_caches() {
    let dir = tempfile::tempdir().unwrap();
    let o = bura(dir.path(), &["compute", "--alpha", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("E = 2.6895"), "{text}");
    assert!(dir.path().join("bura_a0.5_b1_m5_k5_p256.json").exists());

    let j = bura(dir.path(), &["compute", "--alpha", "0.5", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(v["k"], 5);
    assert_eq!(v["extreme_points"].as_array().unwrap().len(), 12);
}

#[test]
fn fractions_lists_poles_and_residues() {
    let dir = tempfile::tempdir().unwrap();
    let o = bura(dir.path(), &["fractions", "--alpha", "0.25"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("-1.07506e1"), "{text}");
    assert!(text.contains("8.92729e0"), "{text}");
}

#[test]
fn solve_reports_the_oracle_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("u.txt");
    let o = bura(dir.path(), &["solve", "--problem", "1d", "--n", "63", "--alpha", "0.5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("oracle:")).expect("oracle line");
    let ratio: f64 = line.split('=').nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap();
    assert!(ratio > 0.0 && ratio <= 2.6896e-4, "{line}");
    let values = std::fs::read_to_string(&out).unwrap();
    assert_eq!(values.lines().count(), 63);
}

#[test]
fn experiment_reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let out = dir.path().join(sub);
        let o = bura(
            dir.path(),
            &["experiment", "fig-1d-validate", "--sizes", "16,32", "--degrees", "5", "--trials", "50", "--out", out.to_str().unwrap()],
        );
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(out.join("fig-1d-validate.csv")).unwrap()
    };
    let a = run("a");
    let b = run("b");
    assert!(!a.is_empty());
    assert_eq!(a, b);
}
