use std::process::{Command, Output};

fn heinz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heinz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn version() {
    let o = heinz(&["version"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).trim(),
        format!("heinz {}", env!("CARGO_PKG_VERSION"))
    );
}

#[test]
fn zou_text_and_json() {
    let o = heinz(&["zou"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(
        text.contains("0.802336") && text.contains("psd: false"),
        "{text}"
    );
    let o = heinz(&["zou", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["psd"], false);
    assert!(v["determinant"].as_f64().unwrap() < 0.0);
}

#[test]
fn check_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = heinz(&[
        "check",
        "--suite",
        "check_t1",
        "--suite",
        "zou",
        "--dims",
        "2,3",
        "--trials",
        "2",
        "--seed",
        "4",
        "--norm",
        "trace",
        "--norm",
        "kyfan:3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["suites"][0]["name"], "check_t1");
    assert_eq!(v["suites"][0]["total"], 2 * 2 * 2 * 81);
    assert_eq!(v["config"]["norms"][1], "kyfan:3");
    assert!(v["version"].is_string() && v["wall_time_s"].is_number());
}

#[test]
fn check_reads_config_file_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"suites": ["check_t2"], "dims": [1], "trials": 1, "seed": 7}"#,
    )
    .unwrap();
    let o = heinz(&[
        "check",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "csv",
        "--norm",
        "operator",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(
        csv.lines().nth(1).unwrap().starts_with("check_t2,9,9,0,"),
        "{csv}"
    );
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"suites": ["check_t1"], "nu_grid": [0.9]}"#).unwrap();
    let o = heinz(&["check", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nu_grid"));

    assert_eq!(heinz(&["check", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(
        heinz(&["check", "--norm", "schatten:0.5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        heinz(&["check", "--config", "/nonexistent/cfg.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(heinz(&["bogus"]).status.code(), Some(2));
}

#[test]
fn sweep_to_stdout_and_file() {
    let o = heinz(&["sweep", "--functional", "K", "--grid", "0.5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("param,value"));
    let value: f64 = lines
        .next()
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!(value.abs() < 1e-12);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("phi.csv");
    let o = heinz(&[
        "sweep",
        "--functional",
        "phi",
        "--r",
        "2",
        "--norm",
        "trace",
        "--points",
        "9",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 10);

    let o = heinz(&["sweep", "--functional", "phi", "--grid", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_spectrum_bounds() {
    let o = heinz(&[
        "sweep",
        "--functional",
        "F",
        "--grid",
        "0.5",
        "--spectrum-bounds",
        "0.5,2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        heinz(&["sweep", "--functional", "F", "--spectrum-bounds", "0.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        heinz(&["sweep", "--functional", "F", "--spectrum-bounds", "2,0.5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn sweep_accepts_negative_parameters() {
    let o = heinz(&[
        "sweep",
        "--functional",
        "K",
        "--from",
        "-2",
        "--to",
        "3",
        "--points",
        "6",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("-2.0"));
    let o = heinz(&["sweep", "--functional", "G", "--grid", "-1,2"]);
    assert_eq!(stdout(&o).lines().count(), 3);
}
