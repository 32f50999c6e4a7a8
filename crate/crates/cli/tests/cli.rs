use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fockgerbe"))
        .args(args)
        .env("FOCKGERBE_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn check_all_passes() {
    let out = run(&["check", "all", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(!stdout.contains("FAIL"));
    let last: Value = serde_json::from_str(stdout.lines().last().unwrap()).unwrap();
    assert_eq!(last["seed"], 5);
    assert_eq!(last["failures"], serde_json::json!([]));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["check", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["implementer"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", r#"{"family": "null", "equator_samples": [12]}"#);
    assert_eq!(run(&["hopf", "--config", &cfg]).status.code(), Some(2));
    let bad = Command::new(env!("CARGO_BIN_EXE_fockgerbe"))
        .args(["check", "geom"])
        .env("FOCKGERBE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn constant_rotation_is_implemented_on_the_truncation() {
    let dir = tempfile::tempdir().unwrap();
    let c = 0.6f64;
    let s = 0.8f64;
    let body = format!(r#"[{{"q": 0, "re": [[{c}, {}], [{s}, {c}]]}}]"#, -s);
    let cfg = write(dir.path(), "rot.json", &body);
    let out = run(&["implementer", "--config", &cfg, "--cutoff", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["mode"], "truncated");
    assert!(v["residual"].as_f64().unwrap() < 1e-9);
    assert!(v["unitarity_defect"].as_f64().unwrap() < 1e-9);
    if let Some(d) = v.get("oracle_defect") {
        assert!(d.as_f64().unwrap() < 1e-8);
    }
    // the rotation commutes with J, so U is Λ_A with phase 1
    assert!(v["lambda_defect"].as_f64().unwrap() < 1e-10);
    assert!((v["lambda_phase"][0].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!(v["lambda_phase"][1].as_f64().unwrap().abs() < 1e-10);
}

#[test]
fn winding_rotation_uses_the_window() {
    // σ(t) = rotation by t
    let dir = tempfile::tempdir().unwrap();
    let body = r#"{"coeffs": [
        {"q": 1, "re": [[0.5, 0], [0, 0.5]], "im": [[0, 0.5], [-0.5, 0]]},
        {"q": -1, "re": [[0.5, 0], [0, 0.5]], "im": [[0, -0.5], [0.5, 0]]}
    ]}"#;
    let cfg = write(dir.path(), "wind.json", body);
    let out_dir = dir.path().join("out");
    let out = run(&["implementer", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["mode"], "window");
    assert!(v["residual"].as_f64().unwrap() < 1e-8);
    let written: Value = serde_json::from_str(&fs::read_to_string(out_dir.join("implementer.json")).unwrap()).unwrap();
    assert_eq!(written, v);
}

#[test]
fn non_orthogonal_loop_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "scale.json", r#"[{"q": 0, "re": [[2, 0], [0, 1]]}]"#);
    assert_eq!(run(&["implementer", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn suspension_recovers_the_winding() {
    let dir = tempfile::tempdir().unwrap();
    let n = 16;
    let all: Vec<usize> = (0..n).collect();
    let phase: Vec<f64> = (0..n).map(|k| 2.0 * std::f64::consts::PI * k as f64 / n as f64).collect();
    let input = serde_json::json!({
        "cover": {"name": "circle", "n_points": n, "sets": {"2": all, "3": all}},
        "cochain": {"cover": "circle", "degree": 1, "entries": [
            {"tuple": [2, 3], "kind": "circle", "data": phase}
        ]}
    });
    let cfg = write(dir.path(), "h.json", &input.to_string());
    let out = run(&["suspend", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert!(v["coboundary_defect"].as_f64().unwrap() < 1e-12);
    assert!(v["round_trip_distance"].as_f64().unwrap() < 1e-12);
    let w = v["windings"].as_array().unwrap();
    assert!(w.iter().any(|x| x["degree"] == 1));
}

#[test]
fn hopf_null_family_is_trivial_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "null.json",
        r#"{"family": "null", "cutoffs": [3], "equator_samples": [16], "meridian_steps": 8}"#,
    );
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let ra = run(&["hopf", "--config", &cfg, "--out", a.to_str().unwrap()]);
    let rb = run(&["hopf", "--config", &cfg, "--out", b.to_str().unwrap()]);
    assert_eq!(ra.status.code(), Some(0), "{}", String::from_utf8_lossy(&ra.stderr));
    assert_eq!(json_of(&ra)["degree"], 0);
    assert_eq!(ra.stdout, rb.stdout);
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(!names.is_empty());
    for name in names {
        assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap(), "{name:?} differs");
    }
}
