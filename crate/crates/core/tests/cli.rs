use std::fs;
use std::path::Path;
use std::process::Command;

fn cist(dir: &Path, args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cist"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn mcist_prints_value() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cist(dir.path(), &["mcist", "--m", "9", "--n", "5"]), (0, "5\n".into()));
    let (code, json) = cist(dir.path(), &["--format", "json", "mcist", "--m", "11", "--n", "3"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["value"], 5);
}

#[test]
fn gen_construct_verify_and_mutation() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(cist(d, &["gen", "--family", "km-cn", "--m", "5", "--n", "4", "--out", "g.json"]).0, 0);
    assert_eq!(cist(d, &["construct", "--family", "k5-cn", "--n", "4", "--out", "t.json"]).0, 0);
    assert_eq!(cist(d, &["verify", "g.json", "t.json"]).0, 0);
    assert_eq!(cist(d, &["verify", "t.json"]).0, 0);

    // move the first edge of tree 0 into tree 1
    let text = fs::read_to_string(d.join("t.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let trees = v["trees"].as_array_mut().unwrap();
    let e = trees[0].as_array_mut().unwrap().remove(0);
    trees[1].as_array_mut().unwrap().push(e);
    fs::write(d.join("bad.json"), serde_json::to_string(&v).unwrap()).unwrap();
    let (code, out) = cist(d, &["--format", "json", "verify", "g.json", "bad.json"]);
    assert_eq!(code, 1);
    let verdict: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(verdict["valid"], false);
    assert!(verdict["failure"].is_object());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(cist(d, &["frobnicate"]).0, 64);
    assert_eq!(cist(d, &["verify", "missing.json"]).0, 2);
    fs::write(d.join("junk.json"), "{ not json").unwrap();
    assert_eq!(cist(d, &["verify", "junk.json"]).0, 2);

    assert_eq!(cist(d, &["gen", "--family", "complete", "--m", "4", "--out", "k4.json"]).0, 0);
    let (code, _) = cist(d, &["search", "k4.json", "--k", "2", "--out", "w.json"]);
    assert_eq!(code, 0);
    assert_eq!(cist(d, &["verify", "k4.json", "w.json"]).0, 0);
    assert_eq!(cist(d, &["search", "k4.json", "--k", "3"]).0, 3);
    assert_eq!(cist(d, &["gen", "--family", "complete", "--m", "8", "--out", "k8.json"]).0, 0);
    let code = cist(d, &["search", "k8.json", "--k", "4", "--budget-ms", "1"]).0;
    assert!(code == 4 || code == 0);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let a = cist(d, &["--format", "json", "validate-appendix"]);
    let b = cist(d, &["--format", "json", "validate-appendix"]);
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
    let (code, out) = cist(d, &["--format", "json", "feasibility", "--r", "5", "--n", "3"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["survivors"].as_array().unwrap().len(), 1);
    assert_eq!(v["survivors"][0]["profile"], serde_json::json!([0, 1, 2, 0]));
}

#[test]
fn dot_and_diagnose() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(cist(d, &["gen", "--family", "km-cn", "--m", "5", "--n", "3", "--out", "g.json"]).0, 0);
    assert_eq!(cist(d, &["construct", "--family", "k5-cn", "--n", "3", "--graph-ref", "g.json", "--out", "t.json"]).0, 0);
    let (code, dot) = cist(d, &["export-dot", "g.json", "t.json"]);
    assert_eq!(code, 0);
    assert_eq!(dot.matches("class=\"lost\"").count(), 3);
    let (code, out) = cist(d, &["--format", "json", "diagnose", "t.json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["conditions"]["implementation_bug"], false);
    assert_eq!(v["report"]["lost_edges"].as_array().unwrap().len(), 3);
}
