use std::path::Path;
use std::process::{Command, Output};

use ftdesign::catalog::{v6_search_group, REPORT_SCHEMA};
use serde_json::Value;

fn ftdesign(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ftdesign")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn catalog_list_names_entries() {
    let o = ftdesign(&["catalog", "list"]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("thm1-case6-q4"));
    assert!(out.contains("thm1-case9-q32-family1"));
}

#[test]
fn catalog_json_matches_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = ftdesign(&["catalog", "run", "--entry", "thm1-case6-q4", "--entry", "thm1-case8-q2", "--json", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    let report = read(&path);
    assert!(jsonschema::JSONSchema::compile(&schema).unwrap().is_valid(&report));
    assert_eq!(report["summary"]["pass"], 2);
}

#[test]
fn sequential_flag_gives_identical_report() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = ["catalog", "run", "--entry", "thm1-case6-q9", "--json"];
    assert_eq!(code(&ftdesign(&[&args[..], &[a.to_str().unwrap()]].concat())), 0);
    assert_eq!(code(&ftdesign(&[&args[..], &[b.to_str().unwrap(), "--sequential"]].concat())), 0);
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn exit_codes() {
    assert_eq!(code(&ftdesign(&["catalog", "run", "--entry", "thm1-case11"])), 1);
    assert_eq!(code(&ftdesign(&["catalog", "run", "--entry", "no-such-entry"])), 2);
    assert_eq!(code(&ftdesign(&["table1", "search", "--lambda", "3"])), 2);
    assert_eq!(code(&ftdesign(&["verify", "--design", "/nonexistent.json", "--group", "atlas:SL2:q=4"])), 2);
    assert_eq!(code(&ftdesign(&["no-such-command"])), 2);
}

#[test]
fn search_verify_autgroup_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let hits = dir.path().join("hits.json");
    let o = ftdesign(&["table1", "search", "--lambda", "2", "--json", hits.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let hits = read(&hits);
    let first = &hits.as_array().unwrap()[0];
    let design = dir.path().join("design.json");
    std::fs::write(&design, serde_json::to_string(&first["design"]).unwrap()).unwrap();
    let group = format!("atlas:{}", v6_search_group(2));
    let design_arg = design.to_str().unwrap();

    let o = ftdesign(&["verify", "--design", design_arg, "--group", &group]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(code(&ftdesign(&["verify", "--design", design_arg])), 2);

    let aut = dir.path().join("aut.json");
    let o = ftdesign(&["autgroup", "--design", design_arg, "--json", aut.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(read(&aut)["order"], first["stabilizer_order"]);

    let mut wrong = first["design"].clone();
    wrong["params"]["lambda"] = Value::from(4);
    std::fs::write(&design, serde_json::to_string(&wrong).unwrap()).unwrap();
    assert_eq!(code(&ftdesign(&["verify", "--design", design_arg, "--group", &group])), 1);
}
