//! End-to-end checks of the command-line interface through the real binary.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsturm"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn table_csv_has_header_and_rows() {
    let out = run(&["table", "--family", "cheb5q", "--q", "0.5", "--nmax", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,gamma,lambda,norm_square,c0,c1,c2,c3");
    assert_eq!(lines.count(), 4);
}

#[test]
fn table_nmax_zero_single_row() {
    let out = run(&["table", "--family", "cheb6q", "--nmax", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn ortho_passes_and_negative_control_fails() {
    let args = ["ortho", "--family", "cheb6q", "--q", "0.8", "--nmax", "8"];
    let out = run(&args);
    assert!(out.status.success(), "orthogonality check should pass");

    let mut neg: Vec<&str> = args.to_vec();
    neg.push("--negative-control");
    let out = run(&neg);
    assert_eq!(out.status.code(), Some(1), "mismatched weight must fail");
}

#[test]
fn json_document_is_versioned_and_parseable() {
    let out = run(&[
        "table", "--family", "qhermite", "--p", "0.25", "--q", "0.6", "--nmax", "2",
        "--format", "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["schema"], "qsturm/1");
    assert_eq!(doc["config"]["family"], "qhermite");
    assert_eq!(doc["records"].as_array().unwrap().len(), 3);
}

#[test]
fn identical_config_gives_identical_bytes() {
    let args = [
        "limits", "--family", "cheb5q", "--nmax", "4", "--format", "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn unsupported_precision_is_rejected() {
    let out = run(&["table", "--family", "cheb5q", "--precision", "64"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("precision"), "diagnostic names the flag: {err}");
}

#[test]
fn residual_and_favard_pass_on_defaults() {
    for cmd in ["residual", "favard"] {
        let out = run(&[cmd, "--family", "cheb5q", "--q", "0.5", "--nmax", "8"]);
        assert!(out.status.success(), "{cmd} should pass");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.csv");
    let out = run(&[
        "weights", "--family", "cheb5q", "--q", "0.5",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("k,x,weight\n"));
}

#[test]
fn limits_marks_points_outside_support() {
    let out = run(&["limits", "--family", "cheb5q", "--nmax", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let unsupported: Vec<&str> = text
        .lines()
        .filter(|l| l.ends_with(",false"))
        .collect();
    assert!(!unsupported.is_empty(), "x = 1.25 lies outside [-1, 1]");
    assert!(unsupported.iter().all(|l| l.contains("1.25")));
}
