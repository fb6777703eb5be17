use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn twospin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twospin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = twospin(&all);
    let v = serde_json::from_slice(&out.stdout).expect("valid json");
    (v, out.status.code().unwrap())
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

fn rows(v: &Value) -> &Vec<Value> {
    v["rows"].as_array().unwrap()
}

fn csv_table(out: &Output) -> Vec<Vec<String>> {
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let mut table = vec![rdr.headers().unwrap().iter().map(String::from).collect()];
    for rec in rdr.records() {
        table.push(rec.unwrap().iter().map(String::from).collect());
    }
    table
}

#[test]
fn optimize_overlap_values() {
    let (v, code) = json(&["optimize", "--fidelity", "overlap", "--class", "all"]);
    assert_eq!(code, 0);
    let want = [
        ("parallel", 0.75),
        ("antiparallel", 0.5 + 1.0 / (2.0 * 3f64.sqrt())),
        ("locc", 0.5 + 1.0 / (3.0 * 2f64.sqrt())),
    ];
    let table = rows(&v);
    assert_eq!(table.len(), 3);
    for (row, (class, f)) in table.iter().zip(want) {
        assert_eq!(row["class"], class);
        assert!((num(&row["fidelity"]) - f).abs() < 1e-12);
    }
    assert_eq!(table[2]["region"], "locc-necessary");
}

#[test]
fn optimize_plane_values() {
    let (v, code) = json(&["optimize", "--fidelity", "plane"]);
    assert_eq!(code, 0);
    let got: Vec<f64> = rows(&v).iter().map(|r| num(&r["fidelity"])).collect();
    for (g, w) in got.iter().zip([0.8, 11.0 / 15.0, 11.0 / 15.0]) {
        assert!((g - w).abs() < 1e-12, "{g} vs {w}");
    }
}

#[test]
fn constant_fidelity_is_one_at_origin() {
    let (v, code) = json(&["optimize", "--fidelity", "1,0,0"]);
    assert_eq!(code, 0);
    for row in rows(&v) {
        assert_eq!(num(&row["fidelity"]), 1.0);
        assert_eq!(num(&row["alpha"]), 0.0);
        assert_eq!(num(&row["gamma"]), 0.0);
        assert_eq!(row["degenerate"], true);
    }
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["optimize", "--fidelity", "cosine"],
        vec!["optimize", "--fidelity", "1,x,0"],
        vec!["optimize", "--class", "diagonal"],
        vec!["region", "--grid", "0"],
        vec!["region", "--grid", "1"],
        vec!["region", "--window", "1,0,0,1"],
        vec!["simulate", "--trials", "0"],
        vec!["discretize", "--alpha", "0", "--gamma", "0", "--design", "dodecagon"],
        vec!["frobnicate"],
    ] {
        let out = twospin(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?} printed a table");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(twospin(&["--help"]).status.code(), Some(0));
}

#[test]
fn failed_check_exits_two() {
    // One trial has zero spread, so any miss of the analytic mean fails.
    let out = twospin(&["simulate", "--class", "parallel", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
    assert!(!out.stdout.is_empty());

    let (v, code) = json(&["discretize", "--alpha", "5", "--gamma", "0"]);
    assert_eq!(code, 2);
    let positivity = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "element positivity")
        .unwrap();
    assert_eq!(positivity["pass"], false);
}

#[test]
fn region_corners_and_size() {
    let (v, code) = json(&["region", "--grid", "2"]);
    assert_eq!(code, 0);
    let corners = rows(&v);
    assert_eq!(corners.len(), 4);
    for r in corners {
        for key in ["parallel", "antiparallel", "locc"] {
            assert_eq!(r[key], false);
        }
    }

    let (v, _) = json(&["region", "--grid", "3", "--window", "-1,1,-1,1"]);
    let origin = rows(&v)
        .iter()
        .find(|r| num(&r["alpha"]) == 0.0 && num(&r["gamma"]) == 0.0)
        .expect("origin on grid");
    for key in ["parallel", "antiparallel", "locc"] {
        assert_eq!(origin[key], true);
    }

    let out = twospin(&["region"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(csv_table(&out).len(), 1 + 201 * 201);
}

#[test]
fn csv_and_json_agree() {
    let args = ["simulate", "--fidelity", "plane", "--trials", "5000", "--rng-seed", "9"];
    let csv_out = twospin(&args);
    let (v, _) = json(&args);
    let table = csv_table(&csv_out);
    let header = &table[0];
    assert_eq!(table.len() - 1, rows(&v).len());
    for (line, row) in table[1..].iter().zip(rows(&v)) {
        for (col, cell) in header.iter().zip(line) {
            let j = &row[col.as_str()];
            let rendered = match j {
                Value::String(s) => s.clone(),
                Value::Null => "NaN".into(),
                other => other.to_string(),
            };
            assert_eq!(&rendered, cell, "column {col}");
        }
    }
}

#[test]
fn json_schema() {
    let (v, _) = json(&["optimize"]);
    let obj = v.as_object().unwrap();
    for key in ["command", "config", "rows", "checks"] {
        assert!(obj.contains_key(key), "{key}");
    }
    assert_eq!(v["command"], "optimize");
    for check in v["checks"].as_array().unwrap() {
        let c = check.as_object().unwrap();
        let mut keys: Vec<_> = c.keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(keys, ["actual", "expected", "name", "pass", "tolerance"]);
    }
}

#[test]
fn seventeen_digits() {
    let out = twospin(&["optimize", "--fidelity", "plane", "--class", "antiparallel"]);
    let table = csv_table(&out);
    let col = table[0].iter().position(|h| h == "fidelity").unwrap();
    let cell = &table[1][col];
    assert_eq!(cell, "0.73333333333333328");
    assert_eq!(cell.parse::<f64>().unwrap(), 11.0 / 15.0);
}

#[test]
fn deterministic_given_seed() {
    let args = ["reproduce", "--trials", "20000", "--rng-seed", "42"];
    let a = twospin(&args);
    let b = twospin(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = twospin(&["reproduce", "--trials", "20000", "--rng-seed", "43"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn reproduce_reports_all_headline_values() {
    let (v, code) = json(&["reproduce", "--trials", "50000"]);
    let closed: Vec<f64> = rows(&v).iter().map(|r| num(&r["closed_form"])).collect();
    for w in [0.75, 0.788675, 0.735702, 0.8, 0.733333] {
        assert!(closed.iter().any(|c| (c - w).abs() < 1e-6), "{w} missing");
    }
    for r in rows(&v) {
        if r["analytic"].is_number() {
            assert!((num(&r["analytic"]) - num(&r["closed_form"])).abs() < 1e-12);
        }
        let se = num(&r["standard_error"]);
        assert!(se > 0.0 && se < 0.01);
    }
    let all_pass = v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true);
    assert_eq!(code, if all_pass { 0 } else { 2 });
}

#[test]
fn discretize_design_and_file() {
    let (v, code) = json(&["discretize", "--alpha", "1.5", "--gamma", "1"]);
    assert_eq!(code, 0);
    assert_eq!(rows(&v).len(), 4);
    let total: f64 = rows(&v).iter().map(|r| num(&r["weight"])).sum();
    assert!((total - 1.0).abs() < 1e-12);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("octahedron.txt");
    std::fs::write(
        &path,
        "# six axes\n1 0 0\n-1 0 0\n0 1 0\n\n0 -1 0\n0 0 1\n0 0 -1\n",
    )
    .unwrap();
    let (v, code) = json(&[
        "discretize",
        "--alpha",
        "0",
        "--gamma",
        "-1",
        "--fidelity",
        "plane",
        "--directions",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(rows(&v).len(), 6);

    // Two antipodal points are not a 2-design.
    std::fs::write(&path, "0 0 1\n0 0 -1\n").unwrap();
    let out = twospin(&["discretize", "--alpha", "0", "--gamma", "0", "--directions", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::write(&path, "0 0 1\n0 zero -1\n").unwrap();
    let out = twospin(&["discretize", "--alpha", "0", "--gamma", "0", "--directions", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn output_file_and_bisectrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    let out = twospin(&[
        "simulate",
        "--bisectrix",
        "--trials",
        "40000",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(Path::new(&path)).unwrap()).unwrap();
    assert_eq!(v["config"]["strategy"], "bisectrix");
    let r = &rows(&v)[0];
    assert!(num(&r["z_score"]) < 4.0 || out.status.code() == Some(2));
}
