use std::process::{Command, Output};

use serde_json::Value;

fn run_with(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_latmon"));
    cmd.args(args).env_remove("LATMON_DEFAULT_TOL");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("spawn latmon")
}

fn run(args: &[&str]) -> Output {
    run_with(args, &[])
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), doc)
}

fn result<'a>(doc: &'a Value, name: &str) -> &'a Value {
    doc["results"].as_array().unwrap().iter().find(|r| r["name"] == name).unwrap_or_else(|| panic!("no record {name}"))
}

fn value(doc: &Value, name: &str) -> f64 {
    result(doc, name)["value"].as_f64().unwrap()
}

#[test]
fn latsum_all_methods_agree() {
    let (code, doc) = json(&["latsum", "--dim", "2", "--p", "2", "--m", "1", "--method", "all"]);
    assert_eq!(code, 0);
    let vals: Vec<f64> = ["direct", "theta_integral", "bessel_series"].iter().map(|n| value(&doc, n)).collect();
    assert!(vals.iter().all(|v| (v - vals[0]).abs() <= 1e-9));
    assert_eq!(result(&doc, "below_limit")["pass"], true);
    assert_eq!(doc["parameters"]["dim"], 2);
    assert!(doc["wall_time_s"].as_f64().unwrap() >= 0.0);
    assert!(doc["tool_version"].is_string());
}

#[test]
fn latsum_domain_and_zero_shift() {
    let out = run(&["latsum", "--dim", "3", "--p", "1.4", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty() && out.stdout.is_empty());
    let (code, doc) = json(&["latsum", "--dim", "2", "--p", "2", "--m", "0"]);
    assert_eq!(code, 0);
    assert_eq!(value(&doc, "direct"), 0.0);
    assert_eq!(run(&["latsum", "--dim", "3", "--p", "2", "--m", "1", "--method", "bessel"]).status.code(), Some(2));
    assert_eq!(run(&["latsum", "--dim", "2", "--p", "2"]).status.code(), Some(2));
}

#[test]
fn latsum_derivative_flag() {
    let (code, doc) = json(&["latsum", "--dim", "3", "--p", "2", "--m", "1", "--method", "theta", "--derivative"]);
    assert_eq!(code, 0);
    assert!(value(&doc, "dI_dm") > 0.0);
}

#[test]
fn tolerance_environment_fallback() {
    let out = run_with(&["latsum", "--dim", "2", "--p", "2", "--m", "1", "--method", "theta"], &[("LATMON_DEFAULT_TOL", "1e-6")]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["parameters"]["tol"].to_string().contains("1e-6"), "{}", doc["parameters"]["tol"]);
    let bad = run_with(&["latsum", "--dim", "2", "--p", "2", "--m", "1"], &[("LATMON_DEFAULT_TOL", "tiny")]);
    assert_eq!(bad.status.code(), Some(2));
    // an explicit flag wins over the environment
    let flag = run_with(&["latsum", "--dim", "2", "--p", "2", "--m", "1", "--tol", "1e-10"], &[("LATMON_DEFAULT_TOL", "tiny")]);
    assert_eq!(flag.status.code(), Some(0));
}

#[test]
fn json_and_csv_carry_the_same_numbers() {
    let runs: [&[&str]; 3] = [
        &["latsum", "--dim", "2", "--p", "1.5", "--m", "0.5"],
        &["dimbound", "--model", "ns2d", "--nu", "0.01", "--area", "1", "--f-norm", "1", "--q-table"],
        &["fuzz", "--check", "gagnir", "--q", "3", "--trials", "20", "--modes", "4", "--seed", "3"],
    ];
    for args in runs {
        let (_, doc) = json(args);
        let mut csv_args = args.to_vec();
        csv_args.push("--csv");
        let out = run(&csv_args);
        let mut rd = csv::Reader::from_reader(out.stdout.as_slice());
        let header: Vec<String> = rd.headers().unwrap().iter().map(String::from).collect();
        assert_eq!(header, ["command", "kind", "name", "value", "error_bound", "reference", "pass", "detail"]);
        let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
        let records = doc["results"].as_array().unwrap();
        assert_eq!(rows.len(), records.len());
        for (row, rec) in rows.iter().zip(records) {
            assert_eq!(&row[2], rec["name"].as_str().unwrap());
            for (col, key) in [(3, "value"), (4, "error_bound"), (5, "reference")] {
                match rec[key].as_f64() {
                    Some(v) => assert_eq!(row[col].parse::<f64>().unwrap().to_bits(), v.to_bits(), "{key} of {}", &row[2]),
                    None => assert!(row[col].is_empty()),
                }
            }
        }
    }
}

#[test]
fn certify_constants_and_ranges() {
    let (code, doc) = json(&["certify", "--condition", "condmon", "--y-min", "1e-3", "--y-max", "100", "--samples", "100000"]);
    assert_eq!(code, 0);
    assert!((value(&doc, "g_at_pi") - 0.0064).abs() < 5e-4);
    let (code, doc) = json(&["certify", "--condition", "suff3", "--y-min", "1e-3", "--y-max", "100", "--samples", "20000", "--refine"]);
    assert_eq!(code, 0);
    assert!((value(&doc, "y_star") - 1.6144).abs() < 5e-4);
    assert_eq!(value(&doc, "violations"), 0.0);
    for bad in [["1", "1"], ["0", "1"], ["3", "2"]] {
        let out = run(&["certify", "--condition", "condmon", "--y-min", bad[0], "--y-max", bad[1]]);
        assert_eq!(out.status.code(), Some(2), "{bad:?}");
    }
}

#[test]
fn dimbound_ns2d() {
    let (code, doc) = json(&["dimbound", "--model", "ns2d", "--nu", "0.01", "--area", "1", "--f-norm", "1", "--clt", "fhjn"]);
    assert_eq!(code, 0);
    assert_eq!(value(&doc, "grashof"), 1e4);
    assert!((value(&doc, "li_yau") - 541.8).abs() < 0.5);
    assert!((value(&doc, "pre_lt") - 2.389e5).abs() < 1e2);
    assert!(value(&doc, "li_yau") < value(&doc, "no_li_yau"));
    assert_eq!(result(&doc, "q_lt_n_lifschitz")["pass"], true);
    let (_, custom) = json(&["dimbound", "--model", "ns2d", "--nu", "0.01", "--area", "1", "--f-norm", "1", "--clt", "0.5"]);
    assert_eq!(value(&custom, "clt"), 0.5);
    assert_eq!(run(&["dimbound", "--model", "ns2d", "--nu", "0.01", "--area", "1", "--clt", "fhjn"]).status.code(), Some(2));
    assert_eq!(run(&["dimbound", "--model", "ns2d", "--nu", "1", "--area", "1", "--f-norm", "1", "--clt", "big"]).status.code(), Some(2));
}

#[test]
fn dimbound_q_table_brackets_the_root() {
    let (_, doc) = json(&["dimbound", "--model", "ns2d", "--nu", "0.01", "--area", "1", "--f-norm", "1", "--q-table"]);
    let table: Vec<f64> = doc["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["kind"] == "q_table" && r["name"].as_str().unwrap().starts_with("q_lt("))
        .map(|r| r["value"].as_f64().unwrap())
        .collect();
    assert_eq!(table.len(), 11);
    assert!(table.first().unwrap() > &0.0 && table.last().unwrap() < &0.0);
}

#[test]
fn dimbound_alpha_models() {
    let (code, doc) = json(&[
        "dimbound", "--model", "alpha2d", "--bc", "no-boundary", "--gamma", "1", "--alpha", "0.1", "--g-norm", "1", "--curl-g-norm", "1",
    ]);
    assert_eq!(code, 0);
    assert!((value(&doc, "alpha2d") - 0.3979).abs() < 1e-4);
    assert!(doc["warnings"].as_array().unwrap().is_empty());
    let (code, doc) = json(&["dimbound", "--model", "alpha2d", "--gamma", "1", "--alpha", "0.1", "--g-norm", "1"]);
    assert_eq!(code, 0);
    assert_eq!(doc["warnings"].as_array().unwrap().len(), 1);
    let (code, doc) = json(&["dimbound", "--model", "alpha3d", "--gamma", "1", "--alpha", "0.1", "--g-norm", "1"]);
    assert_eq!(code, 0);
    assert!((value(&doc, "alpha3d") - 8.3882).abs() < 1e-4);
    assert_eq!(run(&["dimbound", "--model", "alpha2d", "--gamma", "1", "--alpha", "0.1"]).status.code(), Some(2));
    assert_eq!(run(&["dimbound", "--model", "alpha3d", "--alpha", "0.1", "--g-norm", "1"]).status.code(), Some(2));
}

#[test]
fn fuzz_checks() {
    let (code, doc) = json(&["fuzz", "--check", "liebd2", "--p", "1", "--n", "5", "--m", "2", "--trials", "10"]);
    assert_eq!(code, 0);
    let first = result(&doc, "first_trial_lhs");
    assert_eq!(first["reference"].as_f64().unwrap(), 1.25);
    assert!(first["value"].as_f64().unwrap() <= 1.25);
    let (code, doc) = json(&["fuzz", "--check", "gagnir", "--q", "4", "--trials", "200", "--modes", "16", "--seed", "42"]);
    assert_eq!(code, 0);
    assert!(value(&doc, "max_ratio") < value(&doc, "gagnir_constant"));
    assert_eq!(doc["seeds"], serde_json::json!([42]));
    let (code, _) = json(&["fuzz", "--check", "alpha", "--n", "4", "--trials", "100", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(run(&["fuzz", "--check", "gagnir", "--q", "1"]).status.code(), Some(2));
    assert_eq!(run(&["fuzz", "--check", "liebd2", "--trials", "0"]).status.code(), Some(2));
}

#[test]
fn reports_are_reproducible() {
    let args = ["fuzz", "--check", "liebd2", "--p", "1.5", "--n", "3", "--m", "1", "--trials", "25", "--seed", "11", "--csv"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn cache_dir_is_used() {
    let dir = std::env::temp_dir().join(format!("latmon-cli-cache-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let d = dir.to_str().unwrap();
    let (code, first) = json(&["latsum", "--dim", "3", "--p", "2", "--m", "1", "--method", "direct", "--cache-dir", d]);
    assert_eq!(code, 0);
    assert!(std::fs::read_dir(&dir).unwrap().count() >= 1);
    let (_, second) = json(&["latsum", "--dim", "3", "--p", "2", "--m", "1", "--method", "direct", "--cache-dir", d]);
    assert_eq!(value(&first, "direct"), value(&second, "direct"));
    std::fs::remove_dir_all(&dir).unwrap();
}
