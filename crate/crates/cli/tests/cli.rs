//! End-to-end tests of the binary: exit codes, CSV round-tripping, and
//! bundle determinism.

#![allow(clippy::excessive_precision)] // frozen oracle literals

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tauberkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn predict_worked_inverse_gives_rate_one() {
    let t = 2.0 * 6f64.ln();
    let out = run(&[
        "predict",
        "--M",
        "poly:1",
        "--K",
        "poly:1",
        "--c",
        "1",
        "--t",
        &format!("{t}"),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 1);
    let rate: f64 = rows[0][3].parse().unwrap();
    assert!((rate - 1.0).abs() < 1e-9, "rate = {rate}");
    assert_eq!(rows[0][4], "ok");
}

#[test]
fn predict_large_t_contains_inverse() {
    let out = run(&[
        "predict", "--M", "poly:2", "--K", "poly:2", "--c", "1", "--t", "1e8",
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out));
    let inv: f64 = rows[0][2].parse().unwrap();
    assert!(
        (inv - 2087.2239188651201).abs() / inv < 1e-9,
        "inverse = {inv}"
    );
}

#[test]
fn predict_invalid_dsl_exits_2() {
    let out = run(&["predict", "--M", "poly:-1", "--K", "poly:1", "--t", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("positive"), "stderr: {err}");
}

#[test]
fn predict_degenerate_rows_flagged() {
    let out = run(&[
        "predict", "--M", "poly:1", "--K", "poly:1", "--c", "1", "--t", "0.1,10",
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows[0][4], "degenerate-rate");
    assert_eq!(rows[1][4], "ok");
}

#[test]
fn eval_symmetry_and_regression_value() {
    let out = run(&["eval", "--m", "2", "--t", "0,-5,5", "--tol", "1e-7"]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out));
    let f0: f64 = rows[0][1].parse().unwrap();
    assert!((f0 - 118371.27068120822).abs() < 1e-3, "f_2(0) = {f0}");
    let f_neg: f64 = rows[1][1].parse().unwrap();
    let f_pos: f64 = rows[2][1].parse().unwrap();
    assert!((f_neg - f_pos).abs() <= 1e-10);
}

#[test]
fn eval_odd_m_is_usage_error() {
    let out = run(&["eval", "--m", "3", "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_csv_round_trips_to_full_precision() {
    let out = run(&["eval", "--m", "4", "--t", "0.7", "--tol", "1e-8"]);
    let rows = csv_rows(&stdout(&out));
    let printed = &rows[0][1];
    let value: f64 = printed.parse().unwrap();
    assert_eq!(
        format!("{value:.16e}"),
        *printed,
        "17-digit output must round-trip"
    );
}

#[test]
fn eval_fft_matches_adaptive() {
    let out = run(&[
        "eval",
        "--m",
        "2",
        "--t-range",
        "0:3.141592653589793:5",
        "--method",
        "fft",
        "--s-max",
        "400",
        "--n",
        "16384",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 5);
    let fft_val: f64 = rows[1][1].parse().unwrap();
    let out2 = run(&["eval", "--m", "2", "--t", &rows[1][0], "--tol", "1e-7"]);
    let adaptive: f64 = csv_rows(&stdout(&out2))[0][1].parse().unwrap();
    assert!((fft_val - adaptive).abs() < 1e-5, "{fft_val} vs {adaptive}");
}

#[test]
fn transform_axis_and_out_of_strip_rows() {
    let out = run(&[
        "transform",
        "--m",
        "2",
        "--re-range",
        "0.001:0.1:3:log",
        "--lambda",
        "0.9,0",
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0][6], "ok");
    assert!(
        rows[3][6].contains("error"),
        "out-of-strip point must be flagged: {:?}",
        rows[3]
    );
}

#[test]
fn verify_small_passing_config_exits_zero() {
    // m = 8 sits past every small-m transient: ratios are 1, the fitted
    // slope is within 1% of k_8, and the witness holds at t = 10
    let out = run(&[
        "verify",
        "--m-list",
        "8",
        "--t-count",
        "11",
        "--witness-t",
        "10",
        "--threads",
        "2",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let bundle: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(bundle["pass"], serde_json::json!(true));
    assert!(bundle["reports"].as_array().unwrap().len() >= 8);
}

#[test]
fn verify_default_m2_exits_one_with_honest_failures() {
    let out = run(&[
        "verify",
        "--m-list",
        "2,4",
        "--t-count",
        "11",
        "--witness-t",
        "10,1000",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let bundle: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(bundle["pass"], serde_json::json!(false));
    let reports = bundle["reports"].as_array().unwrap();
    let r2a = reports.iter().find(|r| r["property_id"] == "2a").unwrap();
    assert_eq!(r2a["pass"], serde_json::json!(false));
    let witness = reports
        .iter()
        .find(|r| r["property_id"] == "thm23-witness")
        .unwrap();
    assert_eq!(witness["pass"], serde_json::json!(false));
}

#[test]
fn verify_bundle_deterministic_modulo_timestamp() {
    let args = [
        "verify",
        "--m-list",
        "8",
        "--t-count",
        "11",
        "--witness-t",
        "10",
        "--threads",
        "2",
    ];
    let a = stdout(&run(&args));
    let b = stdout(&run(&args));
    let strip = |s: &str| -> String {
        s.lines()
            .filter(|l| !l.contains("timestamp_unix"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(
        strip(&a),
        strip(&b),
        "bundle must be byte-identical modulo the timestamp"
    );
}

#[test]
fn verify_config_file_and_report_summary() {
    let dir = std::env::temp_dir().join(format!("tauberkit-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("config.json");
    let bundle_path = dir.join("bundle.json");
    std::fs::write(
        &cfg_path,
        r#"{"m_list": [8], "t_count": 11, "witness": {"t_list": [10.0]}}"#,
    )
    .unwrap();
    let out = run(&[
        "verify",
        "--config",
        cfg_path.to_str().unwrap(),
        "--output",
        bundle_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rep = run(&["report", "--bundle", bundle_path.to_str().unwrap()]);
    assert_eq!(rep.status.code(), Some(0));
    let text = stdout(&rep);
    assert!(text.contains("bundle: PASS"));
    assert!(text.contains("q-strip"));
    let rep_csv = run(&[
        "report",
        "--bundle",
        bundle_path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(stdout(&rep_csv).starts_with("property_id,pass,expected_failure"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_bad_config_exits_2() {
    let out = run(&["verify", "--config", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify", "--m-list", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flags_rejected() {
    let out = run(&[
        "predict", "--M", "poly:1", "--K", "poly:1", "--t", "10", "--bogus",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
