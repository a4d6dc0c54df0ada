use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn omcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omcert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn lemma6_json_counts() {
    let out = omcert(&["lemma6", "--threads", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["version"], 1);
    assert_eq!(doc["counts"]["combinations_checked"], 184_756);
    assert_eq!(doc["counts"]["survivor_count"], 20);
    assert_eq!(doc["survivors"].as_array().unwrap().len(), 20);
    assert_eq!(doc["conclusion"]["lemma_circuits"]["1,2,3,4"], "+-+-00");
    assert_eq!(doc["conclusion"]["lemma_circuits"]["1,2,5,6"], "+-00-+");
}

#[test]
fn topes_text_lists_one_per_line() {
    let out = omcert(&[
        "topes",
        "--family",
        "alternating",
        "--n",
        "6",
        "--rank",
        "4",
        "--format",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 26);
    assert_eq!(lines[0], "++++++");
    assert!(lines.iter().all(|l| l.len() == 6 && l.starts_with('+')));

    let m2 = omcert(&["topes", "--family", "m2", "--n", "8", "--format", "text"]);
    assert_eq!(String::from_utf8(m2.stdout).unwrap().lines().count(), 8);
}

#[test]
fn strongmap_and_axioms_exit_zero() {
    for n in ["6", "8"] {
        assert_eq!(
            omcert(&["strongmap", "--n", n]).status.code(),
            Some(0),
            "n={n}"
        );
    }
    assert_eq!(omcert(&["axioms", "--n", "6"]).status.code(), Some(0));
    assert_eq!(
        omcert(&["axioms", "--family", "m2", "--n", "6"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn usage_errors_exit_two() {
    let cases: [&[&str]; 6] = [
        &["frobnicate"],
        &["topes", "--n", "0"],
        &["topes", "--threads", "0"],
        &["topes", "--family", "m2", "--n", "7"],
        &["topes", "--n", "6", "--rank", "9"],
        &["validate"],
    ];
    for args in cases {
        assert_eq!(omcert(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn all_then_validate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let out = omcert(&["all", "--output", path_arg(&cert)]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: Value = serde_json::from_slice(&std::fs::read(&cert).unwrap()).unwrap();
    assert_eq!(doc["conclusion"]["circuit_a"], "+-00-+00");
    assert_eq!(doc["conclusion"]["circuit_b"], "+-00+-00");
    assert_eq!(doc["conclusion"]["verdict"]["status"], "nonfactorizable");

    let ok = omcert(&["validate", "--input", path_arg(&cert)]);
    assert_eq!(
        ok.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );

    // swap one survivor tope for one that no survivor contains
    let mut bad = doc.clone();
    let survivor = &mut bad["survivors"][0]["topes"];
    let present: Vec<String> = survivor
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    let pool = doc["instance"]["pool"].as_array().unwrap();
    let outsider = pool
        .iter()
        .find(|t| !present.contains(&t.as_str().unwrap().to_string()))
        .unwrap();
    survivor[present.len() - 1] = outsider.clone();
    let corrupted = dir.path().join("corrupted.json");
    std::fs::write(&corrupted, serde_json::to_vec_pretty(&bad).unwrap()).unwrap();
    let out = omcert(&["validate", "--input", path_arg(&corrupted)]);
    assert_eq!(out.status.code(), Some(1));

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, b"{ not json").unwrap();
    assert_eq!(
        omcert(&["validate", "--input", path_arg(&garbage)])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn output_is_thread_independent() {
    let one = omcert(&["verify-n8", "--threads", "1"]);
    let three = omcert(&["verify-n8", "--threads", "3"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
}
