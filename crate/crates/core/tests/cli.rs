use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;

fn qdisc(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qdisc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn qdisc");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn spectrum_json() {
    let (code, out, _) = qdisc(&["spectrum", "--q", "1/2", "--cutoff", "400", "--format", "json"], "");
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!((v["c1"].as_f64().unwrap() - 0.4444).abs() < 0.01);
    assert!((v["c2"].as_f64().unwrap() - 4.0).abs() < 0.01);
    assert_eq!(v["N"], 400);
    assert_eq!(v["weights"].as_array().unwrap().len(), 400);
}

#[test]
fn act_and_integrate() {
    let (code, out, _) = qdisc(&["act", "--op", "E", "--on", "f0"], "");
    assert_eq!((code, out.as_str()), (0, "(-q^(1/2)/(1-q^2))*z*f0\n"));
    let (code, out, _) = qdisc(&["integrate", "--eta", "f0"], "");
    assert_eq!((code, out.as_str()), (0, "1\n"));
}

#[test]
fn json_output_feeds_back_as_input() {
    let (_, json, _) = qdisc(&["act", "--op", "F*E", "--on", "z*f0*z'", "--format", "json"], "");
    let (code, text, _) = qdisc(&["normalize", "-"], &json);
    let (_, direct, _) = qdisc(&["act", "--op", "F*E", "--on", "z*f0*z'"], "");
    assert_eq!(code, 0);
    assert_eq!(text, direct);
}

#[test]
fn verify_suite_passes() {
    let (code, out, _) = qdisc(&["verify"], "");
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 10);
}

#[test]
fn out_file() {
    let dir = std::env::temp_dir().join(format!("qdisc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("star.json");
    let (code, out, _) = qdisc(&["star", "--kind", "uq", "E", "--format", "json", "--out", path.to_str().unwrap()], "");
    assert_eq!((code, out.as_str()), (0, ""));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v, serde_json::json!([{"a": 1, "b": 1, "c": 0, "coef": "-q^(-2)"}]));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn failures_map_to_exit_codes() {
    let (code, _, err) = qdisc(&["normalize", "z + ) "], "");
    assert_eq!(code, 1);
    assert!(err.contains("byte 4"), "{err}");
    assert_eq!(qdisc(&["box", "[1, 2]", "--q=-0.5"], "").0, 2);
    assert_eq!(qdisc(&["scalar-product", "z", "f0"], "").0, 1);
    assert_eq!(qdisc(&["integrate"], "").0, 1);
}
