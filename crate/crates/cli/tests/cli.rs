use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn tempo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tempo"))
        .args(args)
        .env_remove("TEMPO_THREADS")
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = tempo(args);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout of {args:?} is not one JSON document: {e}\n{}",
            String::from_utf8_lossy(&out.stdout)
        )
    });
    (out.status.code().expect("exit code"), doc)
}

#[test]
fn validate_reports_class_and_errors() {
    let (code, doc) = run(&["validate", &fixture("tree_d2.json")]);
    assert_eq!((code, doc["status"].as_str()), (0, Some("valid")));
    assert_eq!(doc["class"], "bidirected_tree");
    let (code, doc) = run(&["validate", &fixture("bound_below_distance.json")]);
    assert_eq!((code, doc["status"].as_str()), (1, Some("invalid")));
    assert!(doc["reason"].as_str().unwrap().contains("below distance"));
    assert_eq!(run(&["validate", &fixture("missing.json")]).0, 2);
    assert_eq!(run(&["validate", &fixture("malformed.json")]).0, 2);
}

#[test]
fn solve_routes() {
    let cases = [
        ("tree_d2.json", 0, "feasible", "alg1"),
        ("oddk0_3.instance.json", 0, "feasible", "search"),
        ("cycle5_zero_slack.json", 1, "infeasible", "odd_cycle"),
    ];
    for (file, code, status, route) in cases {
        let (c, doc) = run(&["solve", &fixture(file)]);
        assert_eq!(c, code, "{file}");
        assert_eq!(doc["status"], status, "{file}");
        assert_eq!(doc["route"], route, "{file}");
    }
    assert_eq!(run(&["solve", &fixture("bound_below_distance.json")]).0, 2);
}

#[test]
fn solve_writes_the_witness_and_enumerates() {
    let dir = std::env::temp_dir().join(format!("tempo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("lab.json");
    let inst = fixture("oddk0_3.instance.json");
    assert_eq!(run(&["solve", &inst, "--out", out.to_str().unwrap()]).0, 0);
    assert_eq!(run(&["check", &inst, out.to_str().unwrap()]).0, 0);
    let (code, doc) = run(&["solve", &inst, "--all"]);
    assert_eq!(code, 0);
    let (_, free) = run(&["solve", &inst, "--all", "--no-symmetry"]);
    assert_eq!(free["count"].as_u64().unwrap(), 3 * doc["count"].as_u64().unwrap());
    let (code, doc) = run(&[
        "solve",
        &fixture("oddcomb_3_1.instance.json"),
        "--all",
        "--max-nodes",
        "10",
    ]);
    assert_eq!((code, doc["status"].as_str()), (3, Some("unknown")));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn check_reports_violations() {
    let inst = fixture("oddk0_3.instance.json");
    assert_eq!(run(&["check", &inst, &fixture("oddk0_3.reference.json")]).0, 0);
    let (code, doc) = run(&["check", &inst, &fixture("oddk0_3.zero.json")]);
    assert_eq!(code, 1);
    let v = &doc["violations"][0];
    assert!(v["achieved"].as_u64() > v["required"].as_u64());
    assert!(!v["witness"].as_array().unwrap().is_empty());
    assert_eq!(run(&["check", &inst, &fixture("oddk0_3.delta4.json")]).0, 2);
}

#[test]
fn gadget_command() {
    let (code, doc) = run(&["gadget", "auto", "3", "0"]);
    assert_eq!(code, 0);
    assert_eq!(doc["gadget"]["family"], "oddk0");
    let (code, doc) = run(&["gadget", "auto", "4", "2"]);
    assert_eq!(code, 1);
    assert!(doc["reason"].as_str().unwrap().contains("always-feasible region"));
    assert_eq!(run(&["gadget", "evencomb", "4", "1"]).0, 0);
    assert_eq!(run(&["gadget", "nosuch", "4", "1"]).0, 2);
    let (_, doc) = run(&["gadget", "delta4", "4", "0", "--reference"]);
    assert!(doc["reference"]["labels"].is_array());
}

#[test]
fn reduce_command() {
    let (code, doc) = run(&["reduce", "coloring", &fixture("k4.graph.json")]);
    assert_eq!(code, 0);
    assert_eq!(doc["leaves"].as_array().unwrap().len(), 4);
    assert_eq!(doc["instance"]["undirected"], true);
    let (code, doc) = run(&["reduce", "nae3sat", &fixture("one_clause.cnf.json")]);
    assert_eq!(code, 0);
    assert_eq!(doc["instance"]["delta"], 2);
    assert_eq!(doc["readout"].as_array().unwrap().len(), 3);
    let (code, doc) = run(&["reduce", "ttr2dittr", &fixture("path_undirected.json")]);
    assert_eq!(code, 0);
    assert_eq!(doc["gadget"]["family"], "oddk0");
    let (code, doc) = run(&["reduce", "ttr2dittr", &fixture("path_undirected_d2.json")]);
    assert_eq!((code, doc["status"].as_str()), (1, Some("no_gadget")));
}

#[test]
fn certify_command() {
    let (code, doc) = run(&["certify", &fixture("oddk0_3.gadget.json")]);
    assert_eq!((code, doc["status"].as_str()), (0, Some("pass")));
    let (code, doc) = run(&["certify", &fixture("oddcomb_3_1.gadget.json"), "--max-nodes", "50"]);
    assert_eq!((code, doc["status"].as_str()), (3, Some("unknown")));
    let (code, doc) = run(&["certify", &fixture("oddquarter_5_1.mutated.gadget.json")]);
    assert_eq!((code, doc["checks"]["symmetric"].as_str()), (1, Some("fail")));
    assert!(doc["counterexample"]["labels"].is_array());
}

#[test]
fn distances_formats() {
    let inst = fixture("oddk0_3.instance.json");
    let lab = fixture("oddk0_3.reference.json");
    let out = tempo(&["distances", &inst, "--labeling", &lab]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("from,to,static,temporal"));
    assert_eq!(lines.count(), 25);
    let (code, doc) = run(&["distances", &inst, "--format", "json"]);
    assert_eq!(code, 0);
    assert!(doc["temporal"].is_null());
    assert_eq!(doc["static"].as_array().unwrap().len(), 5);
}

#[test]
fn exit_codes_match_status_fields() {
    for args in [
        vec!["solve".to_string(), fixture("tree_d2.json")],
        vec!["solve".to_string(), fixture("cycle5_zero_slack.json")],
        vec!["certify".to_string(), fixture("oddk0_3.gadget.json")],
        vec![
            "check".to_string(),
            fixture("oddk0_3.instance.json"),
            fixture("oddk0_3.zero.json"),
        ],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, doc) = run(&args);
        let expect = match doc["status"].as_str().unwrap() {
            "feasible" | "valid" | "pass" => 0,
            "infeasible" | "invalid" | "fail" => 1,
            _ => 3,
        };
        assert_eq!(code, expect, "{args:?}");
    }
}
