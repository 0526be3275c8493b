use std::process::{Command, Output};

use serde_json::Value;

fn sgps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgps"))
        .args(args)
        .env_remove("SGPS_CAPS")
        .output()
        .expect("binary runs")
}

/// Parses every line and checks the trailing summary against the record count.
fn records(out: &Output) -> Vec<Value> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let recs: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).expect("jsonl line")).collect();
    let (summary, body) = recs.split_last().expect("summary record");
    assert_eq!(summary["record"], "summary");
    assert_eq!(summary["records"].as_u64().unwrap() as usize, body.len());
    assert_eq!(summary["exit_code"].as_i64().unwrap() as i32, out.status.code().unwrap());
    body.to_vec()
}

fn jsonl(args: &[&str]) -> (i32, Vec<Value>) {
    let mut full = args.to_vec();
    full.extend(["--output", "jsonl"]);
    let out = sgps(&full);
    let recs = records(&out);
    (out.status.code().unwrap(), recs)
}

fn of_kind<'a>(recs: &'a [Value], kind: &str) -> Vec<&'a Value> {
    recs.iter().filter(|r| r["record"] == kind).collect()
}

#[test]
fn ring_list_covers_the_catalog() {
    let (code, recs) = jsonl(&["ring", "list"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = recs.iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 15);
    assert!(names.contains(&"mat2:z2") && names.contains(&"ut2:z2"));
}

#[test]
fn z6_idempotents() {
    let (code, recs) = jsonl(&["ring", "show", "--ring", "zn:6"]);
    assert_eq!(code, 0);
    assert_eq!(of_kind(&recs, "idempotents")[0]["idempotents"], serde_json::json!([0, 1, 3, 4]));
}

#[test]
fn z4_is_generalized_right_baer() {
    let (code, recs) = jsonl(&["ring", "check", "--ring", "zn:4", "--class", "gen-baer", "--side", "right"]);
    assert_eq!(code, 0);
    let verdict = of_kind(&recs, "class_verdict");
    assert_eq!(verdict.len(), 1);
    assert_eq!(verdict[0]["verdict"], "yes");
    assert_eq!(of_kind(&recs, "instance").len(), 15);
}

#[test]
fn z4_is_not_baer() {
    let (code, recs) = jsonl(&["ring", "check", "--ring", "zn:4", "--class", "baer"]);
    assert_eq!(code, 0);
    let verdict = of_kind(&recs, "class_verdict")[0];
    assert_eq!(verdict["verdict"], "no");
    assert_eq!(verdict["witness"], serde_json::json!([2]));
}

#[test]
fn verify_exit_codes() {
    let (code, recs) = jsonl(&["verify", "thm37-baer", "--ring", "zn:4", "--monoid", "nat:natural", "--box", "3"]);
    assert_eq!(code, 0);
    assert_eq!(of_kind(&recs, "theorem_report")[0]["outcome"], "pass");

    let (code, recs) = jsonl(&["verify", "prop34", "--ring", "zn:6", "--box", "2"]);
    assert_eq!(code, 0);
    let idempotent_instances = of_kind(&recs, "theorem_instance")
        .into_iter()
        .filter(|r| r["instance"].as_str().unwrap().starts_with("f = "))
        .count();
    assert_eq!(idempotent_instances, 4);

    let (code, recs) = jsonl(&["verify", "thm37-baer", "--ring", "mat2:z2"]);
    assert_eq!(code, 4);
    assert_eq!(of_kind(&recs, "theorem_report")[0]["outcome"], "hypothesis_not_met");
}

#[test]
fn search_findings() {
    let (code, recs) = jsonl(&["search"]);
    assert_eq!(code, 0);
    assert!(recs
        .iter()
        .any(|r| r["ring"] == "zn:4" && r["finding"] == "generalized Baer but not Baer"));

    let (code, recs) = jsonl(&["search", "--properties", "armendariz", "--catalog", "mat2:z2"]);
    assert_eq!(code, 0);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["finding"], "not Armendariz at box {0,1}");

    let (code, recs) = jsonl(&["search", "--catalog", ""]);
    assert_eq!(code, 0);
    assert!(recs.is_empty());
}

#[test]
fn product_names_survive_comma_separated_catalogs() {
    let (code, recs) = jsonl(&["search", "--catalog", "prod:z2,z4,zn:4", "--properties", "classes"]);
    assert_eq!(code, 0);
    let rings: Vec<&str> = recs.iter().map(|r| r["ring"].as_str().unwrap()).collect();
    assert_eq!(rings, ["prod:z2,z4", "zn:4"]);
}

#[test]
fn budget_exhaustion_keeps_partial_findings() {
    let (code, recs) = jsonl(&["search", "--catalog", "zn:4,mat2:z2", "--budget", "300"]);
    assert_eq!(code, 3);
    assert!(!of_kind(&recs, "finding").is_empty());
    assert_eq!(recs.last().unwrap()["record"], "error");
}

#[test]
fn errors_are_records_with_codes() {
    let (code, recs) = jsonl(&["ring", "show", "--ring", "zn:1"]);
    assert_eq!(code, 2);
    assert_eq!(recs[0]["record"], "error");

    let (code, recs) = jsonl(&["verify", "prop34", "--ring", "zn:4", "--sigma", "3"]);
    assert_eq!(code, 2);
    assert!(recs[0]["message"].as_str().unwrap().contains("valid selectors"));

    let out = Command::new(env!("CARGO_BIN_EXE_sgps"))
        .args(["ring", "list", "--output", "jsonl"])
        .env("SGPS_CAPS", "construct=4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(records(&out).last().unwrap()["kind"], "size_cap_exceeded");
}

#[test]
fn spec_files_override_builtins() {
    let dir = std::env::temp_dir().join(format!("sgps-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z4.toml");
    std::fs::write(&path, "[ring]\nkind = \"zn\"\nn = 4\nlabel = \"four\"\n[monoid]\nkind = \"nat\"\norder = \"trivial\"\n")
        .unwrap();
    let p = path.to_str().unwrap();
    let (code, recs) = jsonl(&["verify", "thm37-baer", "--ring", p, "--box", "2"]);
    assert_eq!(code, 0);
    let report = of_kind(&recs, "theorem_report")[0];
    assert_eq!(report["ring"], "four");
    assert!(report["context"].as_str().unwrap().contains("nat:trivial"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn jsonl_is_byte_identical_across_runs() {
    for args in [
        &["verify", "thm37-quasibaer", "--ring", "zn:6", "--seed", "7", "--output", "jsonl"][..],
        &["search", "--output", "jsonl"][..],
        &["verify", "corollaries", "--ring", "zn:4", "--output", "jsonl"][..],
    ] {
        assert_eq!(sgps(args).stdout, sgps(args).stdout, "{args:?}");
    }
}

#[test]
fn text_output_mirrors_records() {
    let text = String::from_utf8(sgps(&["ring", "check", "--ring", "zn:4", "--class", "baer"]).stdout).unwrap();
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("class_verdict: "));
    assert!(last.contains("verdict=no") && last.contains("witness=[2]"));
}
