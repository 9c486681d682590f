use std::collections::BTreeMap;
use std::process::{Command, Output};

use serde_json::Value;
use setfn_core::report::CertificateReport;
use setfn_core::verify_certificate;

fn setfn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_setfn")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Flattens a JSON report the way the human renderer lays it out: dotted
/// paths, scalar arrays and function descriptors kept as compact JSON.
fn flatten(prefix: &str, key: &str, v: &Value, out: &mut BTreeMap<String, String>) {
    let path = if prefix.is_empty() { key.to_string() } else { format!("{prefix}.{key}") };
    let compact_array = matches!(v, Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()));
    match v {
        Value::Object(map) if key != "function" => {
            for (k, inner) in map {
                flatten(&path, k, inner, out);
            }
        }
        Value::Array(items) if !compact_array => {
            for (i, inner) in items.iter().enumerate() {
                flatten(&path, &i.to_string(), inner, out);
            }
        }
        Value::String(s) => {
            out.insert(path, s.clone());
        }
        other => {
            out.insert(path, other.to_string());
        }
    }
}

fn human_fields(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .map(|line| {
            let (k, v) = line.split_once(": ").unwrap_or_else(|| panic!("malformed line {line:?}"));
            (k.to_string(), v.to_string())
        })
        .collect()
}

fn assert_human_matches_json(args: &[&str]) {
    let human = setfn(args);
    let mut json_args = args.to_vec();
    json_args.push("--json");
    let json = setfn(&json_args);
    assert_eq!(human.status.code(), json.status.code(), "{args:?}");
    let report: Value = serde_json::from_str(&stdout(&json)).unwrap();
    let mut expected = BTreeMap::new();
    for (k, v) in report.as_object().unwrap() {
        flatten("", k, v, &mut expected);
    }
    assert_eq!(human_fields(&stdout(&human)), expected, "{args:?}");
}

#[test]
fn exit_codes() {
    assert_eq!(setfn(&["check", "--builtin", "iou", "--m", "3", "--y", "1"]).status.code(), Some(1));
    assert_eq!(setfn(&["check", "--builtin", "cardinality", "--m", "4"]).status.code(), Some(0));
    assert_eq!(setfn(&["monotone", "--builtin", "truncation", "--m", "4", "--cap", "2"]).status.code(), Some(0));
    assert_eq!(setfn(&["monotone", "--builtin", "neg_iou", "--m", "3", "--y", "1"]).status.code(), Some(1));
    assert_eq!(setfn(&["check", "--function", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(setfn(&["check", "--builtin", "iou", "--m", "3"]).status.code(), Some(2));
    assert_eq!(setfn(&["check", "--builtin", "iou", "--m", "3", "--y", "4"]).status.code(), Some(2));
    assert_eq!(setfn(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(setfn(&["--help"]).status.code(), Some(0));
}

#[test]
fn human_output_mirrors_json() {
    assert_human_matches_json(&["check", "--builtin", "iou", "--m", "3", "--y", "1"]);
    assert_human_matches_json(&["check", "--builtin", "neg_iou", "--m", "4", "--y", "1,2", "--mode", "lattice"]);
    assert_human_matches_json(&["check", "--builtin", "cardinality", "--m", "4"]);
    assert_human_matches_json(&["monotone", "--builtin", "iou", "--m", "3", "--y", "1"]);
    assert_human_matches_json(&["probe", "--builtin", "iou", "--m", "3", "--y", "1"]);
    assert_human_matches_json(&["extension", "--builtin", "iou", "--m", "3", "--y", "1", "--point", "1,0.5,-0.25"]);
    assert_human_matches_json(&["reproduce", "paper"]);
    assert_human_matches_json(&["scan", "--builtin", "neg_iou", "--max-m", "4"]);
    assert_human_matches_json(&["refute-p11", "--m", "2"]);
}

#[test]
fn json_certificates_reload_and_verify() {
    let cases: [&[&str]; 4] = [
        &["check", "--builtin", "iou", "--m", "5", "--y", "2,4", "--mode", "standard", "--json"],
        &["check", "--builtin", "iou", "--m", "5", "--y", "2,4", "--mode", "lattice", "--json"],
        &["check", "--builtin", "neg_iou", "--m", "5", "--y", "3", "--mode", "standard", "--json"],
        &["check", "--builtin", "neg_iou", "--m", "4", "--y", "1,2", "--mode", "paper-literal", "--json"],
    ];
    for args in cases {
        let out = setfn(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(report["verdict"], "violated");
        let cert: CertificateReport = serde_json::from_value(report["certificate"].clone()).unwrap();
        let f = cert.function().unwrap();
        assert!(verify_certificate(&f, &cert.certificate().unwrap()).unwrap(), "{args:?}");
    }
}

#[test]
fn function_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.json");
    // -|A| on two elements, stored with a constant offset.
    std::fs::write(&path, r#"{"kind":"table","m":2,"values":["1","0","0","-1"]}"#).unwrap();
    let file = path.to_str().unwrap();

    let out = setfn(&["check", "--function", file, "--json"]);
    assert_eq!(out.status.code(), Some(0));

    let out = setfn(&["check", "--function", file, "--mode", "paper-literal", "--json"]);
    assert_eq!(out.status.code(), Some(1));

    let out = setfn(&["extension", "--function", file, "--point", "1,1"]);
    assert_eq!(out.status.code(), Some(2), "extension needs f(empty) = 0");
    let out = setfn(&["extension", "--function", file, "--normalize", "--point", "1,1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["value"], "-2");

    std::fs::write(&path, r#"{"kind":"iou","m":3,"y":[1],"values":["0"]}"#).unwrap();
    assert_eq!(setfn(&["check", "--function", file]).status.code(), Some(2));
}

#[test]
fn extension_trace() {
    let out = setfn(&[
        "extension",
        "--builtin",
        "iou",
        "--m",
        "3",
        "--y",
        "1",
        "--point",
        "1,0.5,-0.25",
        "--trace",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let value: f64 = report["value"].as_str().unwrap().parse().unwrap();
    assert!((value - (1.0 - 0.25 + 0.25 / 6.0)).abs() < 1e-12);
    let prefixes: Vec<&Value> = report["chain"].as_array().unwrap().iter().map(|s| &s["prefix"]).collect();
    assert_eq!(prefixes, [&serde_json::json!([1]), &serde_json::json!([1, 2]), &serde_json::json!([1, 2, 3])]);
}

#[test]
fn reproduce_report() {
    let out = setfn(&["reproduce", "paper", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let r: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(r["iou_submodular"], false);
    assert_eq!(r["neg_iou_submodular"], false);
    assert_eq!(r["convexity"]["deficit"].as_str().map(|s| s.parse::<f64>().unwrap() > 0.16), Some(true));
    for summary in r["counterexamples"]["summary"].as_array().unwrap() {
        assert_eq!(summary["count"], summary["sign_ok"]);
        assert_eq!(summary["count"], summary["closed_form_ok"]);
    }
    assert_eq!(r["property11"]["n_B"], 1);
    assert_eq!(r["property11"]["n_A"], 0);
}

#[test]
fn repeated_runs_are_identical() {
    let args =
        ["probe", "--builtin", "neg_iou", "--m", "5", "--y", "1,2", "--samples", "3000", "--seed", "3", "--json"];
    let first = setfn(&args);
    for workers in ["1", "3"] {
        let mut with = args.to_vec();
        with.extend(["--workers", workers]);
        assert_eq!(setfn(&with).stdout, first.stdout);
    }
}
