use std::process::{Command, Output};

use serde_json::Value;

fn dwork(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dwork")).args(args).env_remove("DWORK_PRECISION").output().expect("runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn spectrum_of_the_cubic() {
    let out = dwork(&["spectrum", "-n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    let counts: Vec<u64> = v["data"]["rows"].as_array().unwrap().iter().map(|r| r["count"].as_u64().unwrap()).collect();
    assert_eq!(counts, [1, 3, 3, 1]);
    assert_eq!(v["data"]["total"], 8);
}

#[test]
fn spectrum_csv() {
    let out = dwork(&["--format", "csv", "spectrum", "-n", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("beta,count\n0,1\n1/4,4\n"));
    assert!(text.contains("\n1,19\n"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(dwork(&["spectrum", "-n", "1"]).status.code(), Some(2));
    assert_eq!(dwork(&["sector", "-n", "3", "-m", "1x00"]).status.code(), Some(2));
    assert_eq!(dwork(&["sector", "-n", "3", "-m", "100"]).status.code(), Some(2));
    assert_eq!(dwork(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(dwork(&["--precision", "32", "spectrum", "-n", "2"]).status.code(), Some(2));
}

#[test]
fn quartic_sector_signature_and_concordance() {
    let out = dwork(&["sector", "-n", "3", "-m", "1000", "--actions", "signature"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["data"]["signature"], serde_json::json!([4, 4, "inf"]));
    let names: Vec<&str> = v["verifications"].as_array().unwrap().iter().map(|x| x["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["monodromy_relation", "quartic_concordance"]);
    // permuted exponents land on the same tabulated row
    let v = json(&dwork(&["sector", "-n", "3", "-m", "0,0,1,0", "--actions", "signature"]));
    assert_eq!(v["data"]["signature"], serde_json::json!([4, 4, "inf"]));
}

#[test]
fn printed_zero_sector_matrix_counts_as_a_failure() {
    let out = dwork(&["sector", "-n", "3", "-m", "0000", "--actions", "signature"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["data"]["signature"], serde_json::json!([4, 2, "inf"]));
}

#[test]
fn cubic_monodromy_is_deterministic() {
    let args = ["sector", "-n", "2", "-m", "000", "--actions", "operator,monodromy"];
    let a = dwork(&args);
    let b = dwork(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["verifications"][1]["name"], "cubic_concordance");
    assert_eq!(v["data"]["operator"]["reduced"]["lower"], serde_json::json!(["-1", "0"]));
    let entry = v["data"]["monodromy"]["m0"][0][0][0].as_str().unwrap();
    assert_eq!(entry.len(), "1.".len() + 49);
}

#[test]
fn order_zero_sector_has_no_monodromy() {
    let v = json(&dwork(&["sector", "-n", "2", "-m", "210", "--actions", "operator,signature,solve", "--trunc", "4"]));
    assert_eq!(v["data"]["signature"], Value::Null);
    assert_eq!(v["data"]["solve"], Value::Null);
    assert_eq!(v["data"]["operator"]["reduced"]["order"], 0);
}

#[test]
fn verify_yy_and_appb() {
    let out = dwork(&["verify", "yy"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rows = v["verifications"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r["verdict"] == "PASS"));

    let out = dwork(&["verify", "appb", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert_eq!(text.matches(",PASS").count(), 4);
}

#[test]
fn environment_precision_and_output_file() {
    let dir = std::env::temp_dir().join(format!("dwork-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spectrum.json");
    let out = Command::new(env!("CARGO_BIN_EXE_dwork"))
        .args(["spectrum", "-n", "2", "--out", path.to_str().unwrap()])
        .env("DWORK_PRECISION", "128")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["config"]["precision_bits"], 128);
    std::fs::remove_dir_all(&dir).unwrap();
}
