use std::process::{Command, Output};

use serde_json::Value;

fn rspin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rspin")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = rspin(&all);
    let v: Value = serde_json::from_slice(&out.stdout).expect("json report");
    (v, out.status.code().unwrap())
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn count_reports() {
    let (v, code) = json(&["count", "--g", "3", "--r", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "rspin-report/1");
    assert_eq!(v["outputs"]["total"], "4096");
    assert_eq!(v["outputs"]["even"], "2304");
    assert_eq!(v["outputs"]["odd"], "1792");
    let (v, _) = json(&["count", "--g", "2", "--r", "2"]);
    assert_eq!((v["outputs"]["total"].as_str(), v["outputs"]["even"].as_str(), v["outputs"]["odd"].as_str()), (Some("16"), Some("10"), Some("6")));
}

#[test]
fn bad_modulus_exits_nonzero() {
    let out = rspin(&["count", "--g", "3", "--r", "3"]);
    assert_ne!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("modulus"));
}

#[test]
fn prototype_writes_an_origami_file() {
    let dir = std::env::temp_dir().join(format!("rspin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("h4.txt");
    let (v, code) = json(&["prototype", "--kappa", "4", "--arf", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
    assert_eq!(v["outputs"]["stratum"], serde_json::json!([4]));
    let text = std::fs::read_to_string(&path).unwrap();
    let o = rspin::origami::Origami::parse(&text).unwrap();
    assert_eq!(o.stratum(), vec![4]);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn prototype_argument_rules() {
    assert_ne!(rspin(&["prototype", "--kappa", "2,2", "--arf", "0", "--g", "3"]).status.code(), Some(0));
    let (v, code) = json(&["prototype", "--kappa", "1,1,1,1", "--g", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["case"], 1);
    assert_ne!(rspin(&["prototype", "--kappa", "2,2", "--g", "4"]).status.code(), Some(0));
    assert_ne!(rspin(&["prototype", "--kappa", "1,1,1,1", "--arf", "1"]).status.code(), Some(0));
}

#[test]
fn orbit_partitions() {
    let (v, _) = json(&["orbit", "--g", "2", "--r", "2", "--all"]);
    let mut sizes: Vec<u64> = v["outputs"]["sizes"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![6, 10]);
    let (v, _) = json(&["orbit", "--g", "3", "--r", "2", "--all"]);
    let mut sizes: Vec<u64> = v["outputs"]["sizes"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![28, 36]);
    let (v, _) = json(&["orbit", "--g", "3", "--r", "1"]);
    assert_eq!(v["outputs"]["size"], 1);
}

#[test]
fn winding_of_a_core() {
    let dir = std::env::temp_dir().join(format!("rspin-cli-w-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("l.txt");
    std::fs::write(&path, "3\n(1 2)\n(1 3)\n").unwrap();
    let (v, code) = json(&["winding", "--origami", path.to_str().unwrap(), "--curve", "1:L:R 2:L:R"]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["turning"], 0);
    assert_eq!(v["outputs"]["class"].as_array().unwrap().len(), 4);
    assert_ne!(rspin(&["winding", "--origami", path.to_str().unwrap(), "--curve", "1:L:R"]).status.code(), Some(0));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_suites() {
    let (v, code) = json(&["verify", "relations", "--seed", "7"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["pass"], true);
    assert_eq!(v["seed"], 7);
    let (v, code) = json(&["verify", "johnson", "--g", "4", "--s", "3"]);
    assert_eq!(code, 0);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    let (_, code) = json(&["verify", "oracle", "--trials", "500"]);
    assert_eq!(code, 0);
    assert_ne!(rspin(&["verify", "johnson", "--g", "4", "--s", "2"]).status.code(), Some(0));
}

#[test]
fn same_seed_same_report() {
    let a = without_timing(json(&["verify", "oracle", "--trials", "50", "--seed", "3"]).0);
    let b = without_timing(json(&["verify", "oracle", "--trials", "50", "--seed", "3"]).0);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let c = without_timing(json(&["verify", "gcd", "--seed", "3"]).0);
    assert_eq!(c["pass"], true);
}
