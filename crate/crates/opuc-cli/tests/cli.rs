//! End-to-end tests of the `opuc` binary: frozen-value artifacts, schema
//! auto-detection, exit codes, determinism, and configuration precedence.

use std::path::Path;
use std::process::{Command, Output};

fn opuc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opuc"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) {
    std::fs::write(dir.join(name), body).unwrap();
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn frozen_zeros_of_the_free_sequence() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "in.json",
        r#"{"alphas": [[0.0,0.0],[0.0,0.0],[0.0,0.0]]}"#,
    );
    let out = opuc(
        &["compute", "--input", "in.json", "--target", "zeros", "--out", "art"],
        tmp.path(),
    );
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let v = read_json(&tmp.path().join("art/zeros.json"));
    let zeros = v["zeros"].as_array().unwrap();
    assert_eq!(zeros.len(), 3);
    for z in zeros {
        let (re, im) = (z[0].as_f64().unwrap(), z[1].as_f64().unwrap());
        assert!(re.hypot(im) < 1e-6, "zero {re}+{im}i too far from 0");
    }
}

#[test]
fn frozen_phi_and_moments() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "in.json",
        r#"{"alphas": [[0.5,0.0],[0.3333333333333333,0.0]]}"#,
    );
    let out = opuc(
        &[
            "compute", "--input", "in.json", "--target", "phi,moments", "--out", "art",
        ],
        tmp.path(),
    );
    assert_eq!(exit_code(&out), 0, "{out:?}");

    let phi = read_json(&tmp.path().join("art/phi.json"));
    assert_eq!(phi["degree"], 2);
    let want = [-1.0 / 3.0, -1.0 / 3.0, 1.0];
    for (k, w) in want.iter().enumerate() {
        let c = &phi["coefficients"][k];
        assert!((c[0].as_f64().unwrap() - w).abs() < 1e-12);
        assert!(c[1].as_f64().unwrap().abs() < 1e-12);
    }

    let moments = read_json(&tmp.path().join("art/moments.json"));
    for k in [1, 2] {
        let c = &moments["moments"][k];
        assert!((c[0].as_f64().unwrap() - 0.5).abs() < 1e-12, "c_{k}");
        assert!(c[1].as_f64().unwrap().abs() < 1e-12);
    }
}

#[test]
fn frozen_szego_report_limit() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "in.json", r#"{"alphas": [[0.5,0.0]]}"#);
    let out = opuc(
        &[
            "compute", "--input", "in.json", "--target", "szego-report", "--out", "art",
        ],
        tmp.path(),
    );
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let v = read_json(&tmp.path().join("art/szego-report.json"));
    assert!((v["f_limit"].as_f64().unwrap() - 0.75).abs() < 1e-9);
    assert!((v["g_limit"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-9);
}

#[test]
fn bands_artifact_matches_closed_forms() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "in.json", r#"{"alphas": [[0.5,0.0],[-0.5,0.0]]}"#);
    let out = opuc(
        &["compute", "--input", "in.json", "--target", "bands", "--out", "art"],
        tmp.path(),
    );
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let v = read_json(&tmp.path().join("art/bands.json"));
    assert_eq!(v["period"], 2);
    assert!((v["capacity"].as_f64().unwrap() - 0.75f64.sqrt()).abs() < 1e-12);
    let bands = v["bands"].as_array().unwrap();
    assert_eq!(bands.len(), 2);
    for b in bands {
        assert!((b["mass"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    }
}

#[test]
fn jacobi_from_both_directions() {
    let tmp = tempfile::tempdir().unwrap();
    // Coefficient input: one pair (1/2, -1/2) maps to a_1 = sqrt(3)/2, b_1 = 1.
    write(tmp.path(), "in.json", r#"{"alphas": [[0.5,0.0],[-0.5,0.0]]}"#);
    let out = opuc(
        &["compute", "--input", "in.json", "--target", "jacobi", "--out", "a1"],
        tmp.path(),
    );
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let v = read_json(&tmp.path().join("a1/jacobi.json"));
    assert!((v["a"][0].as_f64().unwrap() - 0.75f64.sqrt()).abs() < 1e-12);
    assert!((v["b"][0].as_f64().unwrap() - 1.0).abs() < 1e-12);

    // Jacobi input is validated and echoed.
    write(
        tmp.path(),
        "jac.json",
        r#"{"a": [1.4142135623730951, 1.0], "b": [0.0, 0.0]}"#,
    );
    let out = opuc(
        &["compute", "--input", "jac.json", "--target", "jacobi", "--out", "a2"],
        tmp.path(),
    );
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let v = read_json(&tmp.path().join("a2/jacobi.json"));
    assert!((v["a"][0].as_f64().unwrap() - 2.0f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["b"].as_array().unwrap().len(), 2);
}

#[test]
fn measure_input_is_auto_detected() {
    let tmp = tempfile::tempdir().unwrap();
    let weight = vec!["1.0"; 64].join(",");
    write(
        tmp.path(),
        "unif.json",
        &format!(r#"{{"grid_size": 64, "ac_weight": [{weight}]}}"#),
    );
    let out = opuc(
        &[
            "compute", "--input", "unif.json", "--target", "moments", "--max-n", "4",
            "--out", "art",
        ],
        tmp.path(),
    );
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let v = read_json(&tmp.path().join("art/moments.json"));
    let c = v["moments"].as_array().unwrap();
    assert_eq!(c.len(), 5);
    assert!((c[0][0].as_f64().unwrap() - 1.0).abs() < 1e-14);
    for m in &c[1..] {
        assert!(m[0].as_f64().unwrap().abs() < 1e-12);
        assert!(m[1].as_f64().unwrap().abs() < 1e-12);
    }
}

#[test]
fn artifacts_are_byte_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "in.json",
        r#"{"alphas": [[0.5,0.0],[0.3333333333333333,0.0]]}"#,
    );
    let targets = "phi,zeros,moments,schur,cmv,jacobi,szego-report";
    for dir in ["r1", "r2"] {
        let out = opuc(
            &["compute", "--input", "in.json", "--target", targets, "--out", dir],
            tmp.path(),
        );
        assert_eq!(exit_code(&out), 0, "{out:?}");
    }
    for stem in ["phi", "zeros", "moments", "schur", "cmv", "jacobi", "szego-report"] {
        let a = std::fs::read(tmp.path().join(format!("r1/{stem}.json"))).unwrap();
        let b = std::fs::read(tmp.path().join(format!("r2/{stem}.json"))).unwrap();
        assert_eq!(a, b, "{stem} differs between identical runs");
    }
}

#[test]
fn config_file_overrides_flags() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "in.json", r#"{"alphas": [[0.5,0.0]]}"#);
    write(tmp.path(), "conf.json", r#"{"format": "csv", "max_n": 3}"#);
    let out = opuc(
        &[
            "compute", "--input", "in.json", "--target", "moments", "--format", "json",
            "--config", "conf.json", "--out", "art",
        ],
        tmp.path(),
    );
    assert_eq!(exit_code(&out), 0, "{out:?}");
    assert!(!tmp.path().join("art/moments.json").exists());
    let body = std::fs::read_to_string(tmp.path().join("art/moments.csv")).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("n,re,im"));
    assert_eq!(lines.next(), Some("0,1,0"));
    assert_eq!(lines.next(), Some("1,0.5,0"));
    assert_eq!(body.lines().count(), 5, "c_0 ..= c_3 plus header");
}

#[test]
fn output_directory_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "in.json", r#"{"alphas": [[0.5,0.0]]}"#);
    let out = Command::new(env!("CARGO_BIN_EXE_opuc"))
        .args(["compute", "--input", "in.json", "--target", "phi"])
        .env("OPUC_OUT_DIR", "envdir")
        .current_dir(tmp.path())
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0, "{out:?}");
    assert!(tmp.path().join("envdir/phi.json").exists());
}

#[test]
fn schema_and_suite_errors_exit_two_with_json_diagnostics() {
    let tmp = tempfile::tempdir().unwrap();

    write(tmp.path(), "bad.json", r#"{"bogus": 1}"#);
    let out = opuc(
        &["compute", "--input", "bad.json", "--target", "phi"],
        tmp.path(),
    );
    assert_eq!(exit_code(&out), 2);
    let diag: serde_json::Value =
        serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    assert_eq!(diag["error"]["kind"], "input-error");

    write(tmp.path(), "broken.json", "{not json");
    let out = opuc(
        &["compute", "--input", "broken.json", "--target", "phi"],
        tmp.path(),
    );
    assert_eq!(exit_code(&out), 2);

    let out = opuc(&["verify", "--suite", "nonsense"], tmp.path());
    assert_eq!(exit_code(&out), 2);
    let diag: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(diag["error"]["message"]
        .as_str()
        .unwrap()
        .contains("registered suites"));
}

#[test]
fn terminal_sequences_are_rejected_by_compute() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "term.json",
        r#"{"alphas": [[1.0,0.0]], "terminal_unimodular": true}"#,
    );
    let out = opuc(
        &["compute", "--input", "term.json", "--target", "phi"],
        tmp.path(),
    );
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn verify_single_suite_reports_and_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = opuc(&["verify", "--suite", "cd-formula"], tmp.path());
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["reports"][0]["suite"], "cd-formula");
    let checks = v["reports"][0]["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        assert_eq!(c["pass"], true);
        assert!(c["residual"].as_f64().unwrap() <= c["tolerance"].as_f64().unwrap());
    }
}

#[test]
fn verify_csv_report_lists_every_check() {
    let tmp = tempfile::tempdir().unwrap();
    let out = opuc(
        &["verify", "--suite", "aleksandrov", "--format", "csv"],
        tmp.path(),
    );
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let body = String::from_utf8(out.stdout).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("suite,check,residual,tolerance,pass"));
    for line in lines {
        assert!(line.starts_with("aleksandrov,"), "{line}");
        assert!(line.ends_with(",true"), "{line}");
    }
}
