use std::process::{Command, Output};

use choimap::maps::{BasisElement, MapSpec};
use choimap::{BuiltinMap, ComplexMap};
use num_complex::Complex64;

fn choimap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_choimap")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_choi_on_ones() {
    let o = choimap(&["eval", "--map", "choi", "--x", "1,1,1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let eig: Vec<f64> = v["eigenvalues"].as_array().unwrap().iter().map(|e| e.as_f64().unwrap()).collect();
    for (got, want) in eig.iter().zip([0.0, 3.0, 3.0]) {
        assert!((got - want).abs() < 1e-12, "{eig:?}");
    }
    let text = stdout(&choimap(&["eval", "--x", "1,1,1"]));
    assert!(text.contains("[  2  -1  -1 ]"), "{text}");
    assert!(text.contains("eigenvalues: 0, 3, 3"), "{text}");
}

#[test]
fn form_eval_vanishes_on_ones() {
    let o = choimap(&["form-eval", "--x", "1,1,1", "--y", "1,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0");
    let o = choimap(&["form-eval", "--x", "1,0,0", "--y", "1,0,0"]);
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn psi2_violation_is_not_a_tool_failure() {
    let o = choimap(&["positivity", "--map", "psi2", "--samples", "2000", "--restarts", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["violation"], true);
    assert!(v["sampling"]["witness"]["lambda_min"].as_f64().unwrap() < 0.0);
}

#[test]
fn choi_matrix_verdicts() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&choimap(&["choi-matrix", "--map", "transpose", "--format", "json"]))).unwrap();
    assert_eq!(v["cp"], false);
    assert_eq!(v["co_cp"], true);
    let text = stdout(&choimap(&["choi-matrix"]));
    assert!(text.contains("CP: false") && text.contains("co-CP: false"), "{text}");
}

#[test]
fn usage_and_selector_errors_exit_2() {
    assert_eq!(choimap(&["eval", "--map", "nonesuch", "--x", "1,1,1"]).status.code(), Some(2));
    assert_eq!(choimap(&["eval", "--x", "1,2"]).status.code(), Some(2));
    assert_eq!(choimap(&["eval", "--x", "1,q,1"]).status.code(), Some(2));
    assert_eq!(choimap(&["frobnicate"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 3, \"images\": {}}").unwrap();
    let o = choimap(&["eval", "--map", bad.to_str().unwrap(), "--x", "1,1,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing image"));
}

#[test]
fn spec_file_round_trips_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi3.json");
    let o = choimap(&["spec", "--map", "psi3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let loaded = MapSpec::load(&path).unwrap();
    assert_eq!(loaded, ComplexMap::builtin(BuiltinMap::Psi3));
    let a = stdout(&choimap(&["eval", "--map", path.to_str().unwrap(), "--x", "1,i,-1"]));
    let b = stdout(&choimap(&["eval", "--map", "psi3", "--x", "1,i,-1"]));
    assert_eq!(a, b);
}

#[test]
fn verify_paper_passes_and_is_deterministic() {
    let o = choimap(&["verify-paper"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 7, "{text}");
    assert!(text.ends_with("overall: PASS\n"));

    let dir = tempfile::tempdir().unwrap();
    let (p1, p2) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&p1, &p2] {
        let o = choimap(&["verify-paper", "--format", "json", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (a, b) = (std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["passed"], true);
    for section in [
        "replay",
        "psi2_counterexample",
        "psi3_certificate",
        "psi1_non_extremality",
        "form_round_trip",
        "proposition",
        "cp_co_cp",
    ] {
        assert_eq!(v[section]["passed"], true, "{section}");
    }
}

#[test]
fn corrupted_psi2_fails_verification() {
    let mut psi2 = ComplexMap::builtin(BuiltinMap::Psi2);
    let mut img = psi2.image(BasisElement::Herm(1, 2)).clone();
    img[(0, 2)] += Complex64::new(0.0, 0.5);
    img[(2, 0)] -= Complex64::new(0.0, 0.5);
    psi2.set_image(BasisElement::Herm(1, 2), img).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi2.json");
    std::fs::write(&path, serde_json::to_string(&MapSpec::from_map(&psi2)).unwrap()).unwrap();
    let o = choimap(&["verify-paper", "--psi2", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAIL  Ψ2 counterexample"), "{text}");
    assert!(text.contains("failed: Ψ2 counterexample"), "{text}");
}

#[test]
fn replay_command_logs_every_step() {
    let o = choimap(&["replay"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().count() > 100);
    let v: serde_json::Value = serde_json::from_str(&stdout(&choimap(&["replay", "--format", "json"]))).unwrap();
    assert_eq!(v["conclusion"], true);
}

#[test]
fn extremality_command() {
    let o = choimap(&["extremality", "--map", "psi1", "--probe-samples", "2000", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["results"][0]["max_epsilon"].as_f64().unwrap() > 0.9);
    let o = choimap(&["extremality", "--random", "3", "--probe-samples", "1000"]);
    let text = stdout(&o);
    assert_eq!(text.matches("max ε = 0,").count(), 3, "{text}");
}
