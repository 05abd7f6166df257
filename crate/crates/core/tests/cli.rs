use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn dgl(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dgl")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).unwrap())
}

fn dgl_json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let (code, out) = dgl(&all);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

#[test]
fn parse_prints_the_formula() {
    let (code, out) = dgl(&["parse", "-f", "G([]p & p) -> []G p"]);
    assert_eq!(code, 0);
    assert!(out.lines().next().unwrap().contains("G"));
    let (code, v) = dgl_json(&["parse", "-f", "p & q"]);
    assert_eq!(code, 0);
    assert_eq!(v["ast"]["and"][0]["atom"], "p");
}

#[test]
fn bad_input_is_a_usage_error() {
    assert_eq!(dgl(&["parse", "-f", "p &"]).0, 2);
    assert_eq!(dgl(&["frobnicate"]).0, 2);
    assert_eq!(dgl(&["check-model", "--model", "/nonexistent.json"]).0, 2);
    assert_eq!(dgl(&["sat", "-f", "p"]).0, 2, "seed is required");
}

#[test]
fn closure_lists_negations() {
    let (code, v) = dgl_json(&["closure", "-f", "F p"]);
    assert_eq!(code, 0);
    let members: Vec<&str> = v["members"].as_array().unwrap().iter().map(|m| m.as_str().unwrap()).collect();
    assert!(members.contains(&"F p") && members.contains(&"~F p") && members.contains(&"~p"));
    assert_eq!(v["size"].as_u64().unwrap() as usize, members.len());
}

#[test]
fn check_model_round_trips() {
    let (code, v) = dgl_json(&["check-model", "--model", fixture("two_chain.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["valid"], true);
    let dir = tempfile::tempdir().unwrap();
    let again = dir.path().join("m.json");
    std::fs::write(&again, v["model"].to_string()).unwrap();
    assert_eq!(dgl(&["check-model", "--model", again.to_str().unwrap()]).0, 0);
}

#[test]
fn non_monotone_model_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"points":["a","b"],"order":[["a","b"]],"f":{"a":"b","b":"a"},"val":{}}"#,
    )
    .unwrap();
    let (code, v) = dgl_json(&["check-model", "--model", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["valid"], false);
}

#[test]
fn validity_exit_codes() {
    let m = fixture("two_chain.json");
    let m = m.to_str().unwrap();
    assert_eq!(dgl(&["valid", "--model", m, "-f", "[]([]p -> p) -> []p"]).0, 0);
    let (code, v) = dgl_json(&["valid", "--model", m, "-f", "p"]);
    assert_eq!(code, 1);
    assert_eq!(v["counterexamples"], serde_json::json!(["b"]));
}

#[test]
fn fuzz_reports_no_failures() {
    let (code, v) = dgl_json(&["fuzz-axioms", "--seed", "3", "--trials", "200"]);
    assert_eq!(code, 0);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn state_of_output_is_a_state() {
    let dir = tempfile::tempdir().unwrap();
    let m = fixture("two_chain.json");
    let m = m.to_str().unwrap();
    let (code, state) = dgl_json(&["state-of", "--model", m, "--point", "a", "-f", "<>p"]);
    assert_eq!(code, 0);
    let path = dir.path().join("state.json");
    std::fs::write(&path, state.to_string()).unwrap();
    let path = path.to_str().unwrap();
    let (code, sim) = dgl_json(&["simformula", "--state", path]);
    assert_eq!(code, 0);
    assert!(sim["dag_size"].as_u64().unwrap() > 0);
    let (code, v) = dgl_json(&["simcheck", "--model", m, "--point", "a", "--state", path]);
    assert_eq!(code, 0);
    assert_eq!(v["agree"], true);
    assert_eq!(v["simulates"], true);
}

#[test]
fn golden_quasimodel_and_unwinding() {
    let q = fixture("golden_quasimodel.json");
    let q = q.to_str().unwrap();
    assert_eq!(dgl(&["check-quasimodel", "--quasimodel", q]).0, 0);
    let (code, v) = dgl_json(&["unwind", "--quasimodel", q, "--from", "v"]);
    assert_eq!(code, 0);
    assert_eq!(v["stem"], serde_json::json!(["v"]));
    assert_eq!(v["loop"], serde_json::json!(["w"]));
    assert_eq!(v["coherent"], true);
    let (_, out) = dgl(&["unwind", "--quasimodel", q, "--from", "u"]);
    assert_eq!(out.trim(), "stem [] loop [u]");
    assert_eq!(dgl(&["unwind", "--quasimodel", q, "--from", "nowhere"]).0, 2);
}

#[test]
fn quasimodel_without_realisation_is_rejected() {
    let text = std::fs::read_to_string(fixture("golden_quasimodel.json")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    doc["S"].as_array_mut().unwrap().retain(|e| e != &serde_json::json!(["v", "w"]));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let (code, v) = dgl_json(&["check-quasimodel", "--quasimodel", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(v["error"].as_str().unwrap().contains("F ~p"));
}

#[test]
fn neighbourhood_membership() {
    let q = fixture("golden_quasimodel.json");
    let q = q.to_str().unwrap();
    let from_v = r#"{"stem":["v"],"loop":["w"]}"#;
    let from_u = r#"{"stem":[],"loop":["u"]}"#;
    assert_eq!(dgl(&["neighbourhood", "--quasimodel", q, "--v", from_v, "--w", from_u, "-m", "1"]).0, 0);
    assert_eq!(dgl(&["neighbourhood", "--quasimodel", q, "--v", from_u, "--w", from_v, "-m", "1"]).0, 1);
}

#[test]
fn sat_writes_a_checkable_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let (code, v) = dgl_json(&[
        "sat",
        "-f",
        "G([]p & p) & ~[]G p",
        "--seed",
        "0",
        "--certificate",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "SAT");
    assert!(v["certificate"]["points"].as_array().unwrap().len() <= 6);
    let (code, checked) = dgl_json(&["check-quasimodel", "--quasimodel", cert.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(checked["valid"], true);
}

#[test]
fn unsatisfiable_exhausts_the_bounds() {
    for f in ["p & ~p", "G p & F ~p"] {
        let (code, v) = dgl_json(&["sat", "-f", f, "--seed", "1", "--threads", "2"]);
        assert_eq!(code, 3, "{f}");
        assert_eq!(v["verdict"], "NO_WITHIN_BOUNDS");
        assert_eq!(v["exhausted"], true);
    }
}
