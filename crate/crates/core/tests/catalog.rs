use ftdesign::catalog::{run_catalog, select_entries, CatalogConfig, EntryStatus, REPORT_SCHEMA};
use ftdesign::{par, Error};
use jsonschema::JSONSchema;
use serde_json::Value;

fn config(ids: &[&str]) -> CatalogConfig {
    CatalogConfig { entries: ids.iter().map(|s| s.to_string()).collect(), ..Default::default() }
}

fn schema() -> JSONSchema {
    let v: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    JSONSchema::compile(&v).unwrap()
}

const SMALL: [&str; 4] = ["thm1-case6-q4", "thm1-case8-q2", "thm1-case11", "thm1-case9-q8-family1"];

#[test]
fn reports_validate_against_schema() {
    let r = run_catalog(&config(&SMALL)).unwrap();
    let json = serde_json::to_value(&r).unwrap();
    let s = schema();
    let errors: Vec<String> = match s.validate(&json) {
        Ok(()) => Vec::new(),
        Err(e) => e.map(|x| x.to_string()).collect(),
    };
    assert!(errors.is_empty(), "{errors:?}");
    assert_eq!(r.summary.total, SMALL.len());
}

#[test]
fn schema_rejects_unknown_fields() {
    let r = run_catalog(&config(&["thm1-case6-q4"])).unwrap();
    let mut json = serde_json::to_value(&r).unwrap();
    json["entries"][0]["extra"] = Value::Bool(true);
    assert!(!schema().is_valid(&json));
}

#[test]
fn runs_are_deterministic_in_both_modes() {
    let ids = ["thm1-case6-q9", "thm1-case8-q3", "table1-lambda2"];
    let a = serde_json::to_string(&run_catalog(&config(&ids)).unwrap()).unwrap();
    let b = serde_json::to_string(&run_catalog(&config(&ids)).unwrap()).unwrap();
    assert_eq!(a, b);
    par::set_sequential(true);
    let c = serde_json::to_string(&run_catalog(&config(&ids)).unwrap());
    par::set_sequential(false);
    assert_eq!(a, c.unwrap());
}

#[test]
fn small_entries_pass() {
    let ids = ["thm1-case6-q4", "thm1-case6-q9", "thm1-case8-q2", "thm1-case9-q8-family1"];
    let r = run_catalog(&config(&ids)).unwrap();
    for e in &r.entries {
        assert_eq!(e.status, EntryStatus::Pass, "{}: {:?}", e.id, e.failed_checks().collect::<Vec<_>>());
        let m = e.measured.as_ref().unwrap();
        assert_eq!((m.v, m.k, m.lambda), (e.expected.v, e.expected.k, Some(e.expected.lambda)));
    }
}

#[test]
fn linear_stabilizer_of_sl2_5_design_is_recorded() {
    let r = run_catalog(&config(&["thm1-case11"])).unwrap();
    let e = r.entry("thm1-case11").unwrap();
    let failed: Vec<&str> = e.failed_checks().map(|c| c.name.as_str()).collect();
    assert_eq!(failed, ["aut-order-480"]);
    assert_eq!(e.find("aut-order-480").unwrap().detail, "stabilizer orders [2880]");
}

#[test]
fn selection_rules() {
    let all = select_entries(&CatalogConfig::default()).unwrap();
    assert!(all.iter().all(|e| !e.large));
    let q8 = select_entries(&config(&["thm1-case9-q8*"])).unwrap();
    assert_eq!(q8.len(), 4);
    let big = select_entries(&config(&["thm1-case9-q32-family1"])).unwrap();
    assert_eq!(big.len(), 1);
    assert!(matches!(select_entries(&config(&["nope"])), Err(Error::UnknownEntry(_))));
}
