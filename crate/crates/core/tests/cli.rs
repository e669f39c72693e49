mod common;

use std::process::{Command, Output};

use common::data_path;

fn mdshift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdshift"))
        .args(args)
        .output()
        .unwrap()
}

fn data(name: &str) -> String {
    data_path(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_reports_hypotheses() {
    let o = mdshift(&["validate", &data("d2.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "strongly connected, not a cycle, ν=2");
}

#[test]
fn contract_g21() {
    let o = mdshift(&["contract", &data("g21.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("roots=[V0] tree_edges=[f0,f1]"));
}

#[test]
fn contract_cycle_is_a_hypothesis_failure() {
    let o = mdshift(&["contract", &data("cycle3.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("standing hypotheses"));
}

#[test]
fn parse_errors_carry_position() {
    let dir = std::env::temp_dir().join(format!("mdshift-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        "{\n  \"vertices\": [\"V\"],\n  \"edges\": [ {\"id\": 1} ]\n}\n",
    )
    .unwrap();
    let o = mdshift(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn classify_fibonacci() {
    let o = mdshift(&["classify", &data("fibonacci.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "I s1=1 s2=1"));
}

#[test]
fn classify_json_is_versioned() {
    let o = mdshift(&["classify", &data("fibonacci.json"), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "mdshift.classification/1");
    assert_eq!(v["matches"][0]["family"], "I");
}

#[test]
fn compare_d2_d3() {
    let o = mdshift(&["compare", &data("d2.json"), &data("d3.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("distinguished by nu"));
}

#[test]
fn neutral_zeta_of_d2() {
    let o = mdshift(&[
        "zeta",
        &data("d2.json"),
        "--neutral",
        "--degree",
        "6",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["equals_circular_code_product"], true);
    let c: Vec<&str> = v["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap())
        .collect();
    assert_eq!(c, ["1", "0", "2", "0", "8", "0", "40"]);
}

#[test]
fn state_cap_exits_with_three() {
    let o = mdshift(&[
        "invariants",
        &data("d3.json"),
        "-n",
        "10",
        "--state-cap",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn canonical_round_trips_through_classify() {
    let o = mdshift(&["canonical", "III", "ell=5", "m=1"]);
    assert_eq!(o.status.code(), Some(0));
    let dir = std::env::temp_dir().join(format!("mdshift-canon-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g51.json");
    std::fs::write(&path, &o.stdout).unwrap();
    let c = mdshift(&["classify", path.to_str().unwrap()]);
    assert!(stdout(&c).lines().any(|l| l == "III ell=5 m=1"));
    let r = mdshift(&["verify-lemmas", path.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["schema"], "mdshift.lemma_report/1");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn enumerate_counts_points() {
    let o = mdshift(&["enumerate", &data("fibonacci.json"), "-n", "2"]);
    assert!(stdout(&o).ends_with("12 points\n"));
}

#[test]
fn bad_params_exit_with_two() {
    let o = mdshift(&["canonical", "III", "ell=5"]);
    assert_eq!(o.status.code(), Some(2));
}
