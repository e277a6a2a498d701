use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

use qgalois_cli::{load_group, parse_args, run};

fn group_file(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../groups").join(format!("{name}.json"))
}

fn qgalois(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qgalois"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn json_of(args: &[&str]) -> (i32, Value) {
    let (code, text) = qgalois(args);
    (code, serde_json::from_str(&text).unwrap_or(Value::Null))
}

#[test]
fn group_files_match_suite() {
    for (name, g) in qgalois_core::suite::all() {
        let loaded = load_group(&group_file(&name.to_lowercase())).unwrap();
        assert_eq!(loaded.elements(), g.elements(), "{name}");
    }
    assert_eq!(load_group(&group_file("trivial")).unwrap().order(), 1);
}

#[test]
fn verify_trivial() {
    let path = group_file("trivial");
    let (code, report) = json_of(&["verify", "--group", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report["subgroup_count"], 1);
    assert_eq!(report["ok"], true);
}

#[test]
fn verify_s3() {
    let path = group_file("s3");
    let (code, report) = json_of(&["verify", "--group", path.to_str().unwrap(), "--trials", "5"]);
    assert_eq!(code, 0);
    assert_eq!(report["subgroup_count"], 6);
    assert_eq!(report["injectivity_ok"], true);
    for r in report["results"].as_array().unwrap() {
        assert_eq!(r["match"], true);
        assert_eq!(r["recovered"], r["subgroup"]);
    }
}

#[test]
fn chartable_s3() {
    let path = group_file("s3");
    let (code, t) = json_of(&["chartable", "--group", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let degrees: Vec<u64> = t["rows"].as_array().unwrap().iter().map(|r| r["degree"].as_u64().unwrap()).collect();
    assert_eq!(degrees, [1, 1, 2]);
    let sizes: Vec<u64> = t["classes"].as_array().unwrap().iter().map(|c| c["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, [1, 3, 2]);
}

#[test]
fn homs_counts() {
    let s3 = group_file("s3");
    let (code, h) = json_of(&["homs", "--group", s3.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(h["count"], 11);
    assert_eq!(h["tensors"].as_array().unwrap().len(), 11);
    assert_eq!(h["tensors"][0]["tensor"].as_array().unwrap().len(), 64);

    // S4 has module dimension 1+1+2+3+3 = 10, above the default tensor limit.
    let s4 = group_file("s4");
    let (_, h) = json_of(&["homs", "--group", s4.to_str().unwrap()]);
    assert_eq!(h["module_dim"], 10);
    assert!(h.get("tensors").is_none());
}

#[test]
fn subgroups_and_irreps() {
    let path = group_file("a4");
    let (_, s) = json_of(&["subgroups", "--group", path.to_str().unwrap()]);
    assert_eq!(s["count"], 10);
    let (code, i) = json_of(&["irreps", "--group", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let irreps = i["irreps"].as_array().unwrap();
    assert_eq!(irreps.len(), 4);
    assert_eq!(irreps[3]["matrices"].as_array().unwrap().len(), 12);
    assert_eq!(irreps[3]["matrices"][0].as_array().unwrap().len(), 3);
}

fn a3_index(group: &str) -> usize {
    let (_, s) = json_of(&["subgroups", "--group", group]);
    s["subgroups"]
        .as_array()
        .unwrap()
        .iter()
        .position(|h| h["order"] == 3)
        .unwrap()
}

#[test]
fn fixed_output_round_trips_through_recover() {
    let dir = tempfile::tempdir().unwrap();
    let group = group_file("s3");
    let group = group.to_str().unwrap();
    let index = a3_index(group).to_string();
    let fixed = dir.path().join("r.json");
    let (code, _) = qgalois(&["fixed", "--group", group, "--subgroup", &index, "-o", fixed.to_str().unwrap()]);
    assert_eq!(code, 0);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&fixed).unwrap()).unwrap();
    assert_eq!(written["dim"], 2);
    assert_eq!(written["block_dims"], serde_json::json!([1, 1, 0]));

    let (code, cert) = json_of(&["recover", "--group", group, "--subspace", fixed.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(cert["order"], 3);
    assert_eq!(cert["recovered"], written["members"]);
    assert_eq!(cert["fixed_match"], true);
    assert_eq!(cert["partition"].as_array().unwrap().len(), 2);
}

#[test]
fn recover_rejects_non_closed_subspace() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    // Trivial block plus one line inside the two-dimensional block of S3's M.
    std::fs::write(
        &path,
        r#"{ "vectors": [
            [[1,0],[0,0],[0,0],[0,0]],
            [[0,0],[0,0],[0.6,0.1],[0.3,-0.7]]
        ] }"#,
    )
    .unwrap();
    let group = group_file("s3");
    let (code, out) = json_of(&["recover", "--group", group.to_str().unwrap(), "--subspace", path.to_str().unwrap()]);
    assert_eq!(code, 26);
    assert_eq!(out["closure_ok"], false);
    assert!(out["witness"]["residual"].as_f64().unwrap() > 1e-8);
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(qgalois(&["verify", "--group", missing.to_str().unwrap()]).0, 3);

    let bad_json = dir.path().join("bad.json");
    std::fs::write(&bad_json, "{ \"degree\": 3 ").unwrap();
    assert_eq!(qgalois(&["verify", "--group", bad_json.to_str().unwrap()]).0, 4);

    let not_perm = dir.path().join("np.json");
    std::fs::write(&not_perm, r#"{ "degree": 3, "generators": [[0, 0, 1]] }"#).unwrap();
    assert_eq!(qgalois(&["chartable", "--group", not_perm.to_str().unwrap()]).0, 10);

    let s3 = group_file("s3");
    assert_eq!(qgalois(&["fixed", "--group", s3.to_str().unwrap(), "--subgroup", "99"]).0, 5);
    assert_eq!(qgalois(&["recover", "--group", s3.to_str().unwrap()]).0, 2);

    let short = dir.path().join("short.json");
    std::fs::write(&short, r#"{ "vectors": [[[1, 0]]] }"#).unwrap();
    let code = qgalois(&["recover", "--group", s3.to_str().unwrap(), "--subspace", short.to_str().unwrap()]).0;
    assert_eq!(code, 14);
}

#[test]
fn help_documents_schemas_and_exit_codes() {
    let (code, text) = qgalois(&["--help"]);
    assert_eq!(code, 0);
    assert!(text.contains("EXIT CODES"));
    assert!(text.contains("\"vectors\""));
}

#[test]
fn output_is_byte_deterministic() {
    let group = group_file("d4");
    let group = group.to_str().unwrap();
    for cmd in ["verify", "chartable", "irreps"] {
        let a = qgalois(&[cmd, "--group", group, "--seed", "3", "--trials", "4"]);
        let b = qgalois(&[cmd, "--group", group, "--seed", "3", "--trials", "4"]);
        assert_eq!(a, b, "{cmd}");
    }
}

#[test]
fn run_writes_to_given_sink() {
    let group = group_file("c2");
    let config = parse_args(["qgalois", "subgroups", "--group", group.to_str().unwrap()]).unwrap();
    let mut buf = Vec::new();
    assert_eq!(run(&config, &mut buf).unwrap(), 0);
    let v: Value = serde_json::from_slice(&buf).unwrap();
    assert_eq!(v["count"], 2);
    let text = String::from_utf8(buf).unwrap();
    assert!(text.find("\"count\"").unwrap() < text.find("\"group_order\"").unwrap());
}
