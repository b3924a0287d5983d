use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn tpe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tpe"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = tpe(&all);
    assert!(
        out.status.code().is_some_and(|c| c <= 1),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn value(report: &Value, player: &str) -> String {
    let v = report["values"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["player"] == player)
        .unwrap();
    v["exact"]["decimal"].as_str().unwrap().to_string()
}

#[test]
fn payoff_examples() {
    let r = json(&["payoff", "--profile", "sigma,sigma,sigma", "--delta", "3/4"]);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(value(&r, "X1"), "191.015625");
    assert_eq!(r["values"][0]["exact"]["num"], "12225");
    assert_eq!(r["values"][0]["exact"]["den"], "64");
    let r = json(&[
        "payoff",
        "--profile",
        "contagious,contagious,contagious",
        "--delta",
        "3/4",
    ]);
    assert_eq!(value(&r, "X1"), "187.5");
    let r = json(&["payoff", "--delta", "0/1"]);
    assert_eq!(value(&r, "X1"), "75");
}

#[test]
fn payoff_from_a_history() {
    let r = json(&["payoff", "--from", "(CC)", "--selected", "X1"]);
    assert_eq!(value(&r, "M"), "275.625");
    let r = json(&["payoff", "--from", "(CC;X1CC)", "--selected", "X2"]);
    assert_eq!(value(&r, "M"), "235");
    assert_eq!(r["start"]["history"], "(CC;X1CC)");
    assert!(r.get("horizon").is_none());
}

#[test]
fn payoff_with_simulation() {
    let r = json(&[
        "payoff",
        "--profile",
        "contagious",
        "--runs",
        "4000",
        "--seed",
        "3",
        "--horizon",
        "40",
    ]);
    let players = r["simulation"]["players"].as_array().unwrap();
    assert_eq!(players.len(), 3);
    assert!(players.iter().all(|p| p["agrees"] == true));
}

#[test]
fn check_exit_codes() {
    let ok = tpe(&["check", "--depth", "2"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("Case 6"));
    let r = json(&["check", "--delta", "7/10", "--depth", "1"]);
    assert_eq!(r["verdict"], false);
    let failing: Vec<u64> = r["cases"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["holds"] == false)
        .map(|c| c["case"].as_u64().unwrap())
        .collect();
    assert_eq!(failing, vec![6]);
    assert_eq!(
        tpe(&["check", "--delta", "7/10", "--depth", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(tpe(&["check", "--delta", "1/2", "--depth", "1"]).status.code(), Some(1));
}

#[test]
fn threshold_examples() {
    let r = json(&["threshold"]);
    assert_eq!(r["delta_star"], "0.752903");
    let explicit = json(&["threshold", "--R", "75", "--T", "100", "--P", "45", "--S", "10"]);
    assert_eq!(r, explicit);
    let none = json(&["threshold", "--T", "70"]);
    assert_eq!(none["interior"], false);
    assert!(none["message"].as_str().unwrap().contains("no interior threshold"));
}

#[test]
fn beliefs_examples() {
    let r = json(&[
        "beliefs",
        "--observe",
        "(X1CC;X2DC)",
        "--scheme",
        "contagion",
        "--eps",
        "1/10,1/20,1/40",
    ]);
    assert_eq!(r["limit"]["limit_class"], "first deviation at stage 1");
    assert_eq!(r["limit"]["stable"], true);
    assert_eq!(r["posteriors"].as_array().unwrap().len(), 3);
    let top = &r["posteriors"][0]["explanations"][0];
    assert_eq!(top["history"], "(DC;X1CC;X2DC)");
    let r = json(&["beliefs", "--observe", "(X1CC;X1CC)"]);
    assert_eq!(r["limit"]["limit_class"], "no deviation");
    let r = json(&["beliefs", "--observe", "(X1CC;X2CC)", "--scheme", "enforcement"]);
    assert_eq!(r["limit"]["limit_class"], "first deviation at stage 3");
    assert_eq!(r["profile"], "sigma,sigma,sigma");
}

#[test]
fn configuration_errors_exit_with_two() {
    for args in [
        &["payoff", "--profile", "bogus"][..],
        &["payoff", "--delta", "0.75"],
        &["payoff", "--delta", "1"],
        &["payoff", "--T", "50"],
        &["beliefs"],
        &["beliefs", "--observe", "(X1CC)", "--eps", "1/10,1/5"],
        &["beliefs", "--observe", "(X1CC)", "--scheme", "unknown"],
        &["payoff", "--config", "/nonexistent/config.json"],
        &["nonsense"],
    ] {
        let out = tpe(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn flags_override_the_config_file() {
    let path = tmp("override.json");
    std::fs::write(
        &path,
        r#"{"delta": "7/10", "profile": ["contagious"], "format": "json"}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let from_file: Value = serde_json::from_slice(&tpe(&["payoff", "--config", p]).stdout).unwrap();
    assert_eq!(from_file["game"]["delta"]["decimal"], "0.7");
    let overridden: Value = serde_json::from_slice(&tpe(&["payoff", "--config", p, "--delta", "3/4"]).stdout).unwrap();
    assert_eq!(value(&overridden, "X1"), "187.5");
}

#[test]
fn deviation_from_the_config_file() {
    let path = tmp("deviation.json");
    std::fs::write(
        &path,
        r#"{"profile": ["contagious"], "deviation": {"player": "X1", "trigger": "()", "continuation": "all-d"}}"#,
    )
    .unwrap();
    let r = json(&["payoff", "--config", path.to_str().unwrap()]);
    assert_eq!(value(&r, "X1"), "188.125");
}

#[test]
fn report_file_matches_stdout() {
    let path = tmp("report.json");
    let out = tpe(&["threshold", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(std::fs::read(&path).unwrap(), out.stdout);
}

#[test]
fn worker_count_does_not_change_output() {
    let base = [
        "simulate",
        "--runs",
        "3000",
        "--horizon",
        "25",
        "--seed",
        "9",
        "--format",
        "json",
    ];
    let run = |w: &str| {
        let mut args = base.to_vec();
        args.extend(["--workers", w]);
        tpe(&args).stdout
    };
    let one = run("1");
    assert!(!one.is_empty());
    assert_eq!(one, run("3"));
    assert_eq!(one, run("16"));
}
