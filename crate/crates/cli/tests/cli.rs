use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

fn gadgets(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gadgets"))
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let doc = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), doc, String::from_utf8(out.stderr).unwrap())
}

fn file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn arrows_exit_codes() {
    let dir = TempDir::new().unwrap();
    let k6 = file(dir.path(), "k6.g6", "E~~w\n");
    let k5 = file(dir.path(), "k5.g6", "D~{\n");

    let (code, doc, _) = gadgets(&["arrows", "--tuple", "3,3", s(&k6)]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["arrows"], true);
    assert_eq!(doc["record"]["subcommand"], "arrows");
    assert_eq!(doc["record"]["inputs"][0]["sha256"].as_str().unwrap().len(), 64);

    let (code, doc, _) = gadgets(&["arrows", "--tuple", "3,3", s(&k5)]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["arrows"], false);
    assert_eq!(doc["result"]["witness"].as_array().unwrap().len(), 10);
}

#[test]
fn unsorted_tuple_is_an_error_unless_normalized() {
    let dir = TempDir::new().unwrap();
    let k5 = file(dir.path(), "k5.g6", "D~{\n");
    let (code, _, err) = gadgets(&["arrows", "--tuple", "3,4", s(&k5)]);
    assert_eq!(code, 2);
    assert!(err.contains("--normalize"));

    let (code, doc, _) = gadgets(&["--normalize", "arrows", "--tuple", "3,4", s(&k5)]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["tuple"]["orders"], serde_json::json!([4, 3]));
    assert_eq!(doc["result"]["tuple"]["order_map"], serde_json::json!([1, 0]));
}

#[test]
fn malformed_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let bad = file(dir.path(), "bad.txt", "n 2\n0 5\n");
    let (code, _, err) = gadgets(&["arrows", "--tuple", "3,3", s(&bad)]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
    let (code, _, _) = gadgets(&["arrows", "--tuple", "3,3", "/nonexistent/graph"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_certifies_and_refuses() {
    let dir = TempDir::new().unwrap();
    let edge = file(dir.path(), "e.txt", "n 2\n0 1\n");
    let path = file(dir.path(), "p.txt", "n 3\n0 1\n1 2\n");

    let (code, doc, _) = gadgets(&["verify", "--tuple", "3,3", "--kind", "determiner", "--x", "1,2", "--e", "0-1", s(&edge)]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["verdict"]["verdict"], "certified");

    let (code, _, _) = gadgets(&[
        "verify", "--tuple", "3,3", "--kind", "positive-sender", "--x", "1,2", "--e", "0-1", "--f", "1-2", s(&path),
    ]);
    assert_eq!(code, 1);

    let (code, _, _) = gadgets(&["verify", "--tuple", "3,3", "--kind", "determiner", "--x", "1,2", "--e", "0-1", "--f", "1-2", s(&path)]);
    assert_eq!(code, 2);
}

#[test]
fn compose_replay_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let path = file(dir.path(), "p.txt", "n 4\n0 1\n1 2\n1 3\n2 3\n");
    let out = dir.path().join("claw.g6");
    let args = ["compose", "claw", "--gadget", s(&path), "--e", "0-1", "--f", "1-2", "--h", "4", "--d", "2"];
    let (code, first, _) = gadgets(&[&args[..], &["--output", s(&out)]].concat());
    assert_eq!(code, 0);
    let (_, second, _) = gadgets(&args);
    assert_eq!(first["result"], second["result"]);
    assert_eq!(fs::read_to_string(&out).unwrap().trim(), first["result"]["graph6"].as_str().unwrap());

    let doc = file(dir.path(), "doc.json", &first.to_string());
    let (code, replayed, _) = gadgets(&["compose", "replay", s(&doc)]);
    assert_eq!(code, 0);
    assert_eq!(replayed["result"]["graph6"], first["result"]["graph6"]);
    assert_eq!(replayed["result"]["tracked"], first["result"]["tracked"]);
    assert_eq!(replayed["record"]["subcommand"], "compose replay");
}

#[test]
fn packing_reports_value_and_bounds() {
    let (code, doc, _) = gadgets(&["packing", "--tuple", "2,2", "--n-max", "5"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["packing"]["value"], 4);
    assert!(doc["result"]["witness_text"].as_str().unwrap().starts_with("pattern 4 2"));

    let (code, doc, _) = gadgets(&["packing", "--tuple", "2,2", "--n-max", "3"]);
    assert_eq!(code, 1);
    assert!(doc["result"]["packing"]["value"].is_null());
}

#[test]
fn searches() {
    let (code, doc, _) = gadgets(&["search", "minimal", "--tuple", "3,3", "--n-max", "6"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["graph6"], serde_json::json!(["E~~w"]));

    let (code, doc, _) = gadgets(&["search", "hypergraph", "--q", "2", "--ell", "2", "--phi", "mono", "--girth", "3", "--max-n", "5"]);
    assert_eq!(code, 0);
    assert!(doc["result"]["hypergraph"].as_str().unwrap().contains("distinguished 0 1"));

    let (code, _, _) = gadgets(&["search", "gadgets", "--tuple", "3,3", "--kind", "negative-sender", "--x", "1,2", "--n-max", "4"]);
    assert_eq!(code, 1);
}

#[test]
fn blowup_records_its_seed() {
    let dir = TempDir::new().unwrap();
    let h = file(dir.path(), "h.txt", "4 4\n0 1 2 3\n");
    let (code, doc, _) = gadgets(&["search", "blowup", "--orders", "2", "--seed", "7", s(&h)]);
    assert_eq!(code, 0);
    assert_eq!(doc["record"]["seed"], 7);
    assert_eq!(doc["result"]["outcome"]["seed"], 7);
    let (_, again, _) = gadgets(&["search", "blowup", "--orders", "2", "--seed", "7", s(&h)]);
    assert_eq!(again["result"], doc["result"]);
}
