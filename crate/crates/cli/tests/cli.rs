//! End-to-end tests of the binary: output schema, determinism, exit codes.

use std::collections::HashMap;
use std::process::{Command, Output};

fn phaselimit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phaselimit"))
        .args(args)
        .env_remove("PHASELIMIT_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

/// Parses the CSV body into (params, header, rows).
fn parse_csv(text: &str) -> (HashMap<String, String>, Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let first = lines.next().expect("parameter line");
    assert!(first.starts_with("# "), "first line is the parameter block");
    let params = first[2..]
        .split(' ')
        .filter_map(|kv| kv.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    let header: Vec<String> = lines
        .next()
        .expect("column line")
        .split(',')
        .map(|s| s.to_string())
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(|s| s.to_string()).collect())
        .collect();
    (params, header, rows)
}

#[test]
fn bounds_emits_the_table_row_values() {
    let out = phaselimit(&["bounds", "--p", "10", "--N", "1000"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let (params, header, rows) = parse_csv(&text);
    assert_eq!(params["p"], "10");
    assert_eq!(header[0], "strategy");
    let value = |name: &str| -> f64 {
        rows.iter()
            .find(|r| r[0] == name)
            .unwrap_or_else(|| panic!("{name} row present"))[1]
            .parse()
            .unwrap()
    };
    assert!((value("hl-joint-bound") - 1.8936059182615588e-3).abs() < 1e-12);
    let pi2 = std::f64::consts::PI.powi(2);
    assert!((value("hl-separate") - pi2 * 1e-3).abs() < 1e-12);
    assert!((value("sql-joint") - 0.025).abs() < 1e-15);
    assert!((value("sql-separate") - 0.1).abs() < 1e-15);
}

#[test]
fn bounds_filters_by_strategy_name() {
    let out = phaselimit(&[
        "bounds",
        "--p",
        "4",
        "--N",
        "64",
        "--strategy",
        "hl-joint-ansatz",
    ]);
    assert!(out.status.success());
    let (_, _, rows) = parse_csv(&stdout(&out));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "hl-joint-ansatz");
    // unknown names are a domain error (exit 2)
    let out = phaselimit(&["bounds", "--p", "4", "--N", "64", "--strategy", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn advantage_below_one_at_ratio_16() {
    let out = phaselimit(&["advantage", "--p", "2", "--ratio", "16"]);
    assert!(out.status.success());
    let (params, header, rows) = parse_csv(&stdout(&out));
    assert_eq!(params["N"], "32");
    let idx = header.iter().position(|c| c == "ratio").unwrap();
    let ratio: f64 = rows[0][idx].parse().unwrap();
    assert!(ratio < 1.0, "ratio = {ratio}");
}

#[test]
fn scan_margin_positive_with_argmin() {
    let out = phaselimit(&["scan-margin", "--points", "500"]);
    assert!(out.status.success());
    let (params, _, rows) = parse_csv(&stdout(&out));
    let min_margin: f64 = params["min_margin"].parse().unwrap();
    assert!(min_margin > 0.0);
    assert!(params.contains_key("argmin_y"));
    assert_eq!(rows.len(), 500);
}

#[test]
fn deterministic_byte_identical_reruns() {
    for args in [
        vec!["scan-margin", "--points", "100"],
        vec!["reproduce", "fig-comp", "--pmax", "6"],
        vec!["photon-stats", "--p", "1", "--N", "7", "--samples", "20000", "--seed", "5"],
        vec!["qfi-table", "--p", "3", "--N", "27", "--n", "9", "--k", "3"],
    ] {
        let a = phaselimit(&args);
        let b = phaselimit(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?} not byte-identical");
    }
}

#[test]
fn exit_codes_distinguish_failure_modes() {
    // bad arguments -> 1 (argument parser)
    let out = phaselimit(&["bounds", "--p", "10"]);
    assert_eq!(out.status.code(), Some(1));
    // domain violation -> 2
    let out = phaselimit(&["separate", "--p", "3", "--N", "100"]);
    assert_eq!(out.status.code(), Some(2));
    let out = phaselimit(&["advantage", "--p", "2"]);
    assert_eq!(out.status.code(), Some(2));
    // numerical non-convergence -> 3 (clamped-estimator grid too coarse)
    let out = phaselimit(&[
        "simulate",
        "--photons",
        "32",
        "--samples",
        "1000",
        "--clamp",
        "1.0",
        "--grid",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn json_output_is_wellformed() {
    let out = phaselimit(&[
        "qfi-table",
        "--p",
        "4",
        "--N",
        "100",
        "--n",
        "10",
        "--k",
        "4",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["params"]["p"], "4");
    assert_eq!(doc["columns"][0], "row");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 9);
}

#[test]
fn table1_has_bolded_cell_and_achievable() {
    let out = phaselimit(&["reproduce", "table-1"]);
    assert!(out.status.success());
    let (params, header, rows) = parse_csv(&stdout(&out));
    assert_eq!(params["p"], "10");
    assert_eq!(params["N"], "1000");
    let col = |name: &str| header.iter().position(|c| c == name).unwrap();
    let joint_hl = rows
        .iter()
        .find(|r| r[col("row")] == "p-phases-jointly" && r[col("column")] == "hl")
        .unwrap();
    let v: f64 = joint_hl[col("value")].parse().unwrap();
    assert!((v - 1.8936059182615588e-3).abs() < 1e-12);
    let a: f64 = joint_hl[col("achievable")].parse().unwrap();
    assert!((a - 2e-3).abs() < 1e-15);
}

#[test]
fn seed_env_variable_is_honored() {
    let base = phaselimit(&[
        "photon-stats", "--p", "1", "--N", "7", "--samples", "20000", "--seed", "7",
    ]);
    let via_env = Command::new(env!("CARGO_BIN_EXE_phaselimit"))
        .args(["photon-stats", "--p", "1", "--N", "7", "--samples", "20000"])
        .env("PHASELIMIT_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(base.stdout, via_env.stdout);
    // explicit flag wins over the environment
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_phaselimit"))
        .args([
            "photon-stats", "--p", "1", "--N", "7", "--samples", "20000", "--seed", "7",
        ])
        .env("PHASELIMIT_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(base.stdout, flag_wins.stdout);
}

#[test]
fn output_file_written() {
    let dir = std::env::temp_dir().join("phaselimit-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bounds.csv");
    let out = phaselimit(&[
        "bounds",
        "--p",
        "2",
        "--N",
        "32",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# cmd=bounds"));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn simplex_reports_extrapolation() {
    let out = phaselimit(&["simplex", "--p", "1", "--resolutions", "8,16,32"]);
    assert!(out.status.success());
    let (params, _, rows) = parse_csv(&stdout(&out));
    let e0: f64 = params["extrapolated"].parse().unwrap();
    let pi2 = std::f64::consts::PI.powi(2);
    assert!((e0 - pi2).abs() < 1e-3 * pi2);
    assert_eq!(rows.len(), 3);
}
