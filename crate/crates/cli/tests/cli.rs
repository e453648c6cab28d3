use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bec-impurity"));
    cmd.env("RUST_LOG", "error");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_owned()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn dispersion_columns_and_values() {
    let out = run(&["dispersion", "--grid", "0:2:3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "p,epsilon,alpha,beta,w");
    let eps: Vec<f64> = column(&text, "epsilon").iter().map(|s| num(s)).collect();
    assert_eq!(eps[0], 0.0);
    assert!((eps[1] - 1.118_033_988_749_895).abs() < 1e-15);
    assert!((eps[2] - 2.828_427_124_746_190).abs() < 1e-15);
    assert_eq!(column(&text, "alpha")[0], "");
    assert_eq!(column(&text, "beta")[0], "");
    assert!(!text.contains('\r'));
}

#[test]
fn empty_grid_gives_header_only() {
    let out = run(&["dispersion", "--grid", "0:1:0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "p,epsilon,alpha,beta,w\n");
}

#[test]
fn rates_rows() {
    let out = run(&["rates", "--grid", "0.5:2:2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let gamma_t = column(&text, "gamma_T_closed");
    let gamma_e = column(&text, "gamma_E");
    assert_eq!(num(&gamma_t[0]), 0.0);
    assert_eq!(column(&text, "dissipative"), ["false", "true"]);
    assert!((num(&gamma_t[1]) / 0.038_889_959_072_326_08 - 1.0).abs() < 1e-14);
    assert!((num(&gamma_e[1]) / 0.050_357_618_712_670_01 - 1.0).abs() < 1e-14);
    for d in column(&text, "quad_rel_diff") {
        assert!(num(&d).abs() < 1e-8);
    }
}

#[test]
fn spectrum_summary_and_guard() {
    let out = run(&["spectrum", "--grid", "0:0.1:2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let e = column(&text, "E_p");
    assert!((num(&e[0]) / 0.127_797_039_476_925_06 - 1.0).abs() < 1e-14);
    let summary = String::from_utf8(out.stderr).unwrap();
    assert!(summary.contains("# M_ef = 1.00028452537610"), "{summary}");

    let out = run(&["spectrum", "--grid", "0:1.5:4"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("q_c = 1"), "{err}");
    assert!(err.contains("1.5"), "{err}");
}

#[test]
fn fig1_limits() {
    let out = run(&["fig1", "--grid", "1:2:2"]);
    let text = stdout(&out);
    assert_eq!(num(&column(&text, "I0")[0]), 4.0 / 3.0);
    assert_eq!(num(&column(&text, "I1")[0]), 2.0 / 15.0);
    let out = run(&["fig1"]);
    let text = stdout(&out);
    let i0: Vec<f64> = column(&text, "I0").iter().map(|s| num(s)).collect();
    assert_eq!(i0.len(), 101);
    assert!(i0.windows(2).all(|w| w[1] < w[0]));
    assert!((i0[0] - std::f64::consts::FRAC_PI_2).abs() < 0.03);
}

#[test]
fn effective_mass_routes() {
    let out = run(&["effective-mass"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(
        column(&text, "method"),
        ["closed", "quadrature", "finite_difference_cutoff", "finite_difference_subtracted", "heavy_limit"]
    );
    let masses: Vec<f64> = column(&text, "effective_mass").iter().map(|s| num(s)).collect();
    for m in &masses[..4] {
        assert!((m / masses[0] - 1.0).abs() < 1e-6);
    }
}

#[test]
fn json_document() {
    let path = scratch("rates.json");
    let out = run(&["rates", "--grid", "0:3:4", "--format", "json", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(doc.as_object().unwrap().keys().collect::<Vec<_>>(), ["inputs", "results", "meta"]);
    assert_eq!(doc["results"].as_array().unwrap().len(), 4);
    assert_eq!(doc["inputs"]["grid"]["count"], 4);
    assert!(doc["meta"]["tolerances"]["quadrature_rel_tol"].is_number());
}

#[test]
fn outputs_are_reproducible() {
    let cfg = scratch("repro.json");
    std::fs::write(&cfg, r#"{"params": {"M": 2.0, "g": 0.7}, "grid": {"start": 1.0, "stop": 9.0, "count": 33}}"#).unwrap();
    let mut files = Vec::new();
    for k in 0..2 {
        let out_path = scratch(&format!("repro_{k}.csv"));
        let status = bin()
            .args(["rates", "--config", cfg.to_str().unwrap(), "--output", out_path.to_str().unwrap()])
            .env("RAYON_NUM_THREADS", if k == 0 { "1" } else { "4" })
            .status()
            .unwrap();
        assert!(status.success());
        files.push(std::fs::read(&out_path).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn flags_override_file() {
    let cfg = scratch("override.json");
    std::fs::write(&cfg, r#"{"grid": {"start": 0.0, "stop": 1.0, "count": 5}}"#).unwrap();
    let out = run(&["dispersion", "--config", cfg.to_str().unwrap(), "--grid", "0:1:2"]);
    assert_eq!(stdout(&out).lines().count(), 3);
}

#[test]
fn box_oracle_single_step() {
    let out = run(&["box-oracle", "--L", "30", "--eta", "0.1", "--pcut", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let err = column(&text, "rel_error_T");
    assert_eq!(err.len(), 1);
    assert!(num(&err[0]).abs() < 0.05);
}

#[test]
fn configuration_errors_exit_2() {
    assert_eq!(run(&["rates", "--tol", "-1e-8"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--tol", "-1e-8"]).status.code(), Some(2));
    assert_eq!(run(&["dispersion", "--grid", "3:1:4"]).status.code(), Some(2));
    assert_eq!(run(&["rates", "--config", "/nonexistent/cfg.json"]).status.code(), Some(2));
    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"params": {"m": -1}}"#).unwrap();
    let out = run(&["rates", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("`m`"));
}

#[test]
fn numerical_failure_exits_3() {
    let cfg = scratch("strong.json");
    std::fs::write(&cfg, r#"{"params": {"a": 5.0}}"#).unwrap();
    assert_eq!(run(&["effective-mass", "--config", cfg.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn check_reports_each_criterion() {
    let out = run(&["check"]);
    let text = stdout(&out);
    let verdicts: Vec<&str> = text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert_eq!(verdicts.len(), 11);
    let failed = verdicts.iter().filter(|l| l.starts_with("FAIL")).count();
    assert_eq!(out.status.code(), Some(if failed == 0 { 0 } else { 1 }));
}
