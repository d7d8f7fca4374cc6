use std::process::{Command, Output};

use serde_json::Value;

fn hyperperiod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperperiod"))
        .args(args)
        .output()
        .expect("spawn binary")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const GAUSS: &str = r#"{"m":1,"a":[[0.4,0],[0.5,0]],"b":[[0,0],[1.3,0]]}"#;

#[test]
fn verify_seeded_m2() {
    let out = hyperperiod(&["verify", "--m", "2", "--seed", "7", "--x", "0.1"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    for r in reports {
        assert_eq!(r["pass"], true);
        assert_eq!(r["m"], 2);
        assert_eq!(r["seed"], 7);
        assert_eq!(r["lhs"].as_array().unwrap().len(), 2);
        for key in ["rhs", "abs_residual", "rel_residual", "tol", "x"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn eval_terminates_on_zero_upper() {
    let doc = r#"{"m":1,"a":[[0.3,0.1],[0,0]],"b":[[0,0],[0.7,0]],"x":[0.5,0]}"#;
    let out = hyperperiod(&["eval", "--params", doc]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], serde_json::json!([1.0, 0.0]));
    assert_eq!(v["tail_bound"], 0.0);
}

#[test]
fn eval_gauss_log() {
    let doc = r#"{"m":1,"a":[[1,0],[1,0]],"b":[[0,0],[2,0]]}"#;
    let out = hyperperiod(&["eval", "--params", doc, "--x", "0.5"]);
    let v = json(&out);
    let re = v["value"][0].as_f64().unwrap();
    let want = -(0.5f64).ln() / 0.5;
    assert!((re - want).abs() < 1e-13, "{re} vs {want}");
}

#[test]
fn params_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    std::fs::write(&path, GAUSS).unwrap();
    let out = hyperperiod(&["quad", "--params", path.to_str().unwrap(), "--x", "0.25"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    let ids: Vec<_> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["identity"].clone())
        .collect();
    assert_eq!(ids[0], "euler_integral");
    assert!(ids[1..].iter().all(|i| i == "beta_product"));
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("periods.json");
    let args = ["periods", "--m", "3", "--seed", "2", "--x", "0.05"];
    let stdout = hyperperiod(&args).stdout;
    let mut with_out = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend(["--out", p]);
    let out = hyperperiod(&with_out);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
    let v: Value = serde_json::from_slice(&stdout).unwrap();
    assert_eq!(v["primal"]["entries"].as_array().unwrap().len(), 4);
    assert_eq!(v["dual"]["dual"], true);
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["intersect", "--m", "3", "--seed", "11", "--basis", "mixed"];
    assert_eq!(hyperperiod(&args).stdout, hyperperiod(&args).stdout);
    let args = ["sweep", "--m", "1..2", "--count", "3"];
    assert_eq!(hyperperiod(&args).stdout, hyperperiod(&args).stdout);
}

#[test]
fn sweep_aggregate() {
    let out = hyperperiod(&["sweep", "--m", "1..4", "--count", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["runs"], 4 * 20 * 3 * 2);
    assert_eq!(v["failures"], serde_json::json!([]));
    assert!(v["max_rel_residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn failing_verdict_exits_one() {
    // loose series tolerance
    let out = hyperperiod(&[
        "verify", "--m", "1", "--seed", "4", "--x", "0.3", "--tol", "1e-2",
    ]);
    assert_eq!(
        out.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let v = json(&out);
    assert!(v.as_array().unwrap().iter().any(|r| r["pass"] == false));
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["verify", "--m", "2", "--x", "0.1"],
        &["verify", "--m", "2", "--seed", "1", "--x", "0.9"],
        &[
            "verify", "--m", "2", "--seed", "1", "--x", "0.1", "--tol", "0.5",
        ],
        &["eval", "--params", "{not json"],
        &["eval", "--params", "/nonexistent/params.json", "--x", "0.1"],
        &["quad", "--m", "4", "--seed", "1", "--x", "0.1"],
        &["bogus"],
        &["intersect", "--m", "2", "--seed", "1", "--basis", "chi"],
    ];
    for args in cases {
        let out = hyperperiod(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn degenerate_parameters_rejected() {
    let doc = r#"{"m":1,"a":[[0.3,0],[1.0,0]],"b":[[0,0],[0.7,0]]}"#;
    let out = hyperperiod(&["intersect", "--params", doc]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("error"), "{err}");
}
