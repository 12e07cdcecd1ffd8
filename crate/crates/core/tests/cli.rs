use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idealmoments")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn group_reports_parameters() {
    let v = json(&run(&["group", "symmetric:3", "--l", "2,3"]));
    assert_eq!(v["invariants"]["n"], 6);
    let moments = v["moments"].as_array().unwrap();
    assert_eq!(moments[0]["parameters"]["alpha"], 2);
    assert_eq!(moments[0]["parameters"]["beta"], 1);
    assert_eq!(moments[0]["delta"]["delta"], "2/11");
    assert_eq!(moments[1]["parameters"]["alpha"], 5);
    assert_eq!(moments[1]["parameters"]["beta"], 4);

    let v = json(&run(&["group", "symmetric:3", "--l", "2", "--theta3", "1/2"]));
    assert_eq!(v["moments"][0]["delta"]["delta"], "2/9");
}

#[test]
fn formal_report_when_normality_fails() {
    let v = json(&run(&["group", "a4", "--nprime", "order2", "--l", "1-3"]));
    assert_eq!(v["assumptions"]["normality_holds"], false);
    assert_eq!(v["assumptions"]["III"]["2"], false);
    assert_eq!(v["assumptions"]["III"]["3"], true);
}

#[test]
fn group_via_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.ini");
    std::fs::write(&path, "[group]\npreset = dihedral:4\n[run]\nl = 2\n").unwrap();
    let v = json(&run(&["--config", path.to_str().unwrap(), "group"]));
    assert_eq!(v["moments"][0]["parameters"]["alpha"], 3);
    assert_eq!(v["moments"][0]["parameters"]["beta"], 1);
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(run(&["group", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["moments", "x^2-1", "--x", "100"]).status.code(), Some(2));
    assert_eq!(run(&["splitting", "x^5-x-1", "--pmax", "100"]).status.code(), Some(2));
    assert_eq!(run(&["splitting", "x^4-2", "--preset", "symmetric:3", "--pmax", "100"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.ini");
    std::fs::write(&path, "[run]\nspeed = 3\n").unwrap();
    assert_eq!(run(&["--config", path.to_str().unwrap(), "group", "a4"]).status.code(), Some(2));
}

#[test]
fn moments_csv_on_stdout() {
    let out = run(&["moments", "x^2+1", "--x", "1000", "--l", "1", "--checkpoints", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("X,S"));
    let last = lines.last().unwrap();
    let (x, s) = last.split_once(',').unwrap();
    assert_eq!(x, "1000");
    // number of ideals of Z[i] with norm ≤ 1000: lattice points (a, b), a > 0, b ≥ 0
    let count = (1i64..=31)
        .flat_map(|a| (0i64..=31).map(move |b| (a, b)))
        .filter(|&(a, b)| a * a + b * b <= 1000)
        .count();
    assert_eq!(s.parse::<usize>().unwrap(), count);
}

#[test]
fn output_independent_of_workers() {
    let a = run(&["--workers", "1", "splitting", "x^4-2", "--pmax", "20000"]);
    let b = run(&["--workers", "4", "splitting", "x^4-2", "--pmax", "20000"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cache_file_and_fit_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("x3.cache");
    let out = run(&["splitting", "x^3-2", "--pmax", "5000", "--cache", cache.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&cache).unwrap();
    assert!(text.starts_with("#field"));
    assert!(text.contains("#fingerprint"));

    let out_dir = dir.path().join("sums");
    let out = run(&["moments", "x^2+1", "--x", "200000", "--l", "1", "--out-dir", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_dir(&out_dir).unwrap().next().unwrap().unwrap().path();
    let v = json(&run(&["fit", "--csv", csv.to_str().unwrap(), "--l", "1", "--predicted", "0"]));
    assert_eq!(v["selection"]["state"], "selected");
    let c0 = v["coefficients"][0].as_f64().unwrap();
    assert!((c0 - std::f64::consts::FRAC_PI_4).abs() < 5e-3, "{c0}");
}

#[test]
fn verify_suite_exit_status() {
    let out = run(&["verify", "delta"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS"));
    assert_eq!(run(&["verify", "bogus"]).status.code(), Some(2));
}
