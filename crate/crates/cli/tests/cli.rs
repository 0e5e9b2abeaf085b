//! End-to-end runs of the gramdet binary against fixture files.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn gramdet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gramdet"))
        .args(args)
        .output()
        .expect("spawn gramdet")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = gramdet(&all);
    let doc = serde_json::from_slice(&out.stdout).expect("json document");
    (doc, out.status.code().unwrap())
}

fn num(v: &Value) -> f64 {
    v.to_string().parse().expect("number")
}

fn assert_schema(doc: &Value) {
    for key in [
        "command",
        "inputs",
        "results",
        "deviations",
        "exit_semantics",
    ] {
        assert!(doc.get(key).is_some(), "missing key {key}");
    }
}

#[test]
fn dist_reports_all_three_methods() {
    let (doc, code) = json(&[
        "dist",
        "--matrix",
        &fixture("diag_matrix.csv"),
        "--vector",
        &fixture("diag_vector.csv"),
    ]);
    assert_eq!(code, 0);
    assert_schema(&doc);
    for method in ["det_ratio", "projection", "qr_coordinate"] {
        assert!(
            (num(&doc["results"][method]) - 2f64.sqrt()).abs() < 1e-12,
            "{method}"
        );
    }
    assert!((num(&doc["results"]["gram_logdet_a"]) - 2f64.ln()).abs() < 1e-14);
    assert!((num(&doc["results"]["gram_logdet_ab"]) - 4f64.ln()).abs() < 1e-14);
    assert!(num(&doc["deviations"]["det_ratio_vs_projection"]) < 1e-12);
}

#[test]
fn dist_of_first_column_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let vector = dir.path().join("b.csv");
    std::fs::write(&vector, "b\n1+1i\n0.5\n-2i\n").unwrap();
    let matrix = dir.path().join("a.csv");
    std::fs::write(&matrix, "a1,a2\n1+1i,0\n0.5,1\n-2i,3\n").unwrap();
    let (doc, code) = json(&[
        "dist",
        "--matrix",
        matrix.to_str().unwrap(),
        "--vector",
        vector.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    for method in ["det_ratio", "projection", "qr_coordinate"] {
        assert!(num(&doc["results"][method]).abs() < 1e-7, "{method}");
    }
}

#[test]
fn dist_rank_deficient_still_reports_qr_value() {
    let (doc, code) = json(&[
        "dist",
        "--matrix",
        &fixture("rank_deficient_matrix.csv"),
        "--vector",
        &fixture("rank_deficient_vector.csv"),
    ]);
    assert_eq!(code, 2);
    assert_schema(&doc);
    assert!(doc["results"]["det_ratio"].is_null());
    assert!((num(&doc["results"]["qr_coordinate"]) - (2.0f64 / 3.0).sqrt()).abs() < 1e-14);
    assert_eq!(doc["exit_semantics"]["code"], 2);
}

#[test]
fn dist_input_errors_exit_one() {
    let out = gramdet(&[
        "dist",
        "--matrix",
        &fixture("diag_matrix.csv"),
        "--vector",
        &fixture("line.csv"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = gramdet(&[
        "dist",
        "--matrix",
        &fixture("missing.csv"),
        "--vector",
        &fixture("diag_vector.csv"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = gramdet(&[
        "dist",
        "--matrix",
        &fixture("square.csv"),
        "--vector",
        &fixture("rank_deficient_vector.csv"),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gram_check_fixtures() {
    let (doc, code) = json(&["gram-check", "--matrix", &fixture("unit_column.csv")]);
    assert_eq!(code, 0);
    assert_eq!(num(&doc["results"]["minor_sum"]), 1.0);
    assert_eq!(num(&doc["results"]["gram_det"]), 1.0);
    assert_eq!(num(&doc["deviations"]["minor_sum_vs_gram_det"]), 0.0);

    let (doc, code) = json(&["gram-check", "--matrix", &fixture("complex_4x3.csv")]);
    assert_eq!(code, 0);
    assert!(num(&doc["deviations"]["minor_sum_vs_gram_det"]) <= 1e-9);
    assert!(num(&doc["deviations"]["orthogonality_relative"]) <= 1e-10);
    assert_eq!(
        doc["results"]["orthogonal_minor_vector"]
            .as_array()
            .unwrap()
            .len(),
        4
    );

    let (doc, code) = json(&["gram-check", "--matrix", &fixture("square.csv")]);
    assert_eq!(code, 1);
    assert_schema(&doc);
}

#[test]
fn regress_line_fixture() {
    let (doc, code) = json(&[
        "regress",
        "--data",
        &fixture("line.csv"),
        "--target",
        "y",
        "--coefficients",
    ]);
    assert_eq!(code, 0);
    let r = &doc["results"];
    assert!((num(&r["loss_value"]) - 0.2f64.sqrt()).abs() < 1e-12);
    assert!((num(&r["correlation_det"]) - 0.9f64.sqrt()).abs() < 1e-12);
    assert!((num(&r["correlation_projection"]) - 0.9f64.sqrt()).abs() < 1e-12);
    assert!((num(&r["mean_squared_loss"]) - 0.2 / 3.0).abs() < 1e-12);
    let a = r["coefficients"].as_array().unwrap();
    assert!((num(&a[0]) - 0.5).abs() < 1e-12 && (num(&a[1]) - 0.6).abs() < 1e-12);
}

#[test]
fn regress_without_solve_has_only_determinant_numbers() {
    let (doc, code) = json(&[
        "regress",
        "--data",
        &fixture("perfect.csv"),
        "--target",
        "y",
        "--no-solve",
    ]);
    assert_eq!(code, 0);
    let r = doc["results"].as_object().unwrap();
    assert!(num(&r["loss_value"]).abs() < 1e-9);
    assert!((num(&r["correlation_det"]) - 1.0).abs() < 1e-9);
    for absent in [
        "coefficients",
        "correlation_projection",
        "loss_value_residual",
    ] {
        assert!(!r.contains_key(absent), "{absent}");
    }
    let out = gramdet(&[
        "regress",
        "--data",
        &fixture("perfect.csv"),
        "--target",
        "y",
        "--no-solve",
        "--coefficients",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn regress_error_exit_codes() {
    let out = gramdet(&[
        "regress",
        "--data",
        &fixture("constant_target.csv"),
        "--target",
        "y",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = gramdet(&["regress", "--data", &fixture("line.csv"), "--target", "z"]);
    assert_eq!(out.status.code(), Some(1));
    let out = gramdet(&[
        "regress",
        "--data",
        &fixture("rank_deficient_matrix.csv"),
        "--target",
        "a2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_and_json_carry_identical_numbers() {
    let args = ["regress", "--data", &fixture("line.csv"), "--target", "y"];
    let text = String::from_utf8(gramdet(&args).stdout).unwrap();
    let (doc, _) = json(&args);
    for (key, value) in doc["results"].as_object().unwrap() {
        if value.is_number() && value.to_string().contains('e') {
            assert!(text.contains(&format!("results.{key}: {value}\n")), "{key}");
        }
    }
}

#[test]
fn verify_is_reproducible_and_validates_trials() {
    let a = gramdet(&["verify", "--seed", "7", "--trials", "10"]);
    let b = gramdet(&["verify", "--seed", "7", "--trials", "10"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(gramdet(&["verify", "--trials", "0"]).status.code(), Some(1));
    let (doc, code) = json(&["verify", "--trials", "5"]);
    assert_eq!(code, 0);
    assert_schema(&doc);
    assert_eq!(doc["inputs"]["seed"], 42);
}

#[test]
fn verify_reports_failure_with_exit_four() {
    // A zero tolerance on a floating-point identity cannot hold on every trial.
    let out = gramdet(&["verify", "--trials", "20", "--tol", "distance_agreement=0"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(
        gramdet(&["verify", "--tol", "bogus=1"]).status.code(),
        Some(1)
    );
}
