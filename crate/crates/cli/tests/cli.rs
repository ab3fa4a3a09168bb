use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn pcurv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcurv")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn compute(cmd: &str, name: &str, algorithm: &str) -> Value {
    let input = fixture(name);
    let out = pcurv(&[cmd, "--input", input.to_str().unwrap(), "--algorithm", algorithm]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    stdout_json(&out)
}

#[test]
fn log_system_has_zero_p_curvature() {
    let v = compute("compute", "log_system.json", "fast");
    assert_eq!(v["numerator"], serde_json::json!([[[]]]));
    assert_eq!(v["denominator"], serde_json::json!([0, 0, 0, 0, 0, 1]));
    assert_eq!(v["p"], 5);
}

#[test]
fn algorithms_agree_on_fixtures() {
    for name in ["log_system.json", "zero_system.json", "dense_system.json", "cubic_system.json"] {
        let fast = compute("compute", name, "fast");
        assert_eq!(fast, compute("compute", name, "katz"), "{name}");
        assert_eq!(fast, compute("compute", name, "single-modulus"), "{name}");
    }
    for name in ["exp_operator.json", "airy_operator.json", "dense_operator.json"] {
        let fast = compute("compute-operator", name, "fast");
        assert_eq!(fast, compute("compute-operator", name, "katz"), "{name}");
        assert_eq!(fast, compute("compute-operator", name, "single-modulus"), "{name}");
    }
}

#[test]
fn exponential_operator() {
    let v = compute("compute-operator", "exp_operator.json", "fast");
    assert_eq!(v["numerator"], serde_json::json!([[[1]]]));
    assert_eq!(v["denominator"], serde_json::json!([1]));
}

#[test]
fn output_files_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("cubic_system.json");
    let mut contents = Vec::new();
    for k in 0..2 {
        let path = dir.path().join(format!("out{k}.json"));
        let out = pcurv(&["compute", "--input", input.to_str().unwrap(), "--output", path.to_str().unwrap()]);
        assert!(out.status.success());
        contents.push(std::fs::read(&path).unwrap());
        let meta: Value =
            serde_json::from_slice(&std::fs::read(dir.path().join(format!("out{k}.json.meta.json"))).unwrap()).unwrap();
        assert_eq!(meta["algorithm"], "fast");
        assert_eq!(meta["r"], 3);
        assert!(meta["wall_seconds"].as_f64().unwrap() >= 0.0);
    }
    assert_eq!(contents[0], contents[1]);
}

#[test]
fn verify_reports_equal_and_differ() {
    for name in ["zero_system.json", "dense_system.json", "dense_operator.json"] {
        let input = fixture(name);
        let out = pcurv(&["verify", "--input", input.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "EQUAL");
    }
    let input = fixture("dense_system.json");
    let out = pcurv(&["verify", "--input", input.to_str().unwrap(), "--corrupt-fast"]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("DIFFER at entry (0, 0)"), "{text}");
}

#[test]
fn verify_guard_refuses_large_instances() {
    let input = fixture("cubic_system.json");
    let out = pcurv(&["verify", "--input", input.to_str().unwrap(), "--max-work", "100"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("max-work"));
}

#[test]
fn bench_table_shape() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bench.csv");
    let out =
        pcurv(&["bench", "--p", "157", "--d", "5", "--r", "5", "--seed", "3", "--output", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["p", "d", "r", "algorithm", "seconds"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][3], "fast");
    assert_eq!(&rows[1][3], "katz");
    assert!(rows.iter().all(|r| r[4].parse::<f64>().is_ok()));
}

#[test]
fn operator_solutions() {
    let input = fixture("airy_operator.json");
    let out = pcurv(&["solutions", "--input", input.to_str().unwrap(), "--precision", "10"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["solutions"][0], serde_json::json!([1, 0, 0, 1, 0, 0, 4, 0, 0, 0]));
    assert_eq!(v["solutions"][1], serde_json::json!([0, 1, 0, 0, 2, 0, 0, 3, 0, 0]));
}

#[test]
fn system_solutions() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("exp.json");
    std::fs::write(&input, r#"{"p":5,"type":"system","denominator":[1],"numerator":[[[1]]]}"#).unwrap();
    let out = pcurv(&["solutions", "--input", input.to_str().unwrap(), "--precision", "12"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["coefficients"], serde_json::json!(vec![[[1]]; 12]));

    let out = pcurv(&["solutions", "--input", fixture("log_system.json").to_str().unwrap(), "--precision", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_and_parse_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.json");
    std::fs::write(&input, r#"{"type":"operator","coeffs":[[0],[1]]}"#).unwrap();
    let out = pcurv(&["compute-operator", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`p`"));

    assert_eq!(pcurv(&["compute", "--bogus"]).status.code(), Some(1));
    assert_eq!(pcurv(&["compute", "--input", "/nonexistent/file.json"]).status.code(), Some(1));
    let op = fixture("exp_operator.json");
    assert_eq!(pcurv(&["compute", "--input", op.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(pcurv(&["bench", "--p", "12", "--d", "1", "--r", "1"]).status.code(), Some(1));
    assert_eq!(pcurv(&["--help"]).status.code(), Some(0));
}
