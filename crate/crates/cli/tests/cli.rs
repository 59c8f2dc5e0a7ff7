use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn entloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entloc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = entloc(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

#[test]
fn demo_prints_baseline_lines() {
    let out = entloc(&["demo"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("concurrence=0.5\n"));
    assert!(text.contains("coa=0.5\n"));
    assert!(text.contains("projective success=0.5 conditional concurrence=1.0\n"));
}

#[test]
fn localize_worked_example() {
    let v = json(&[
        "localize", "--strategy", "distributed", "--p1", "0.5", "--p2", "0.5", "--q1", "0.99", "--q2", "0.99",
        "--noise", "none",
    ]);
    assert!((v["concurrence"].as_f64().unwrap() - 0.980392156862745).abs() < 1e-9);
    assert!(v["concurrence_deviation"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn localize_local_identity_and_two_step_comparison() {
    let v = json(&["localize", "--strategy", "local", "--p3", "0", "--q3", "0"]);
    assert!((v["concurrence"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((v["success_prob"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(v.get("two_step_success").is_some());
}

#[test]
fn localize_damped_matches_closed_forms() {
    let v = json(&[
        "localize", "--strategy", "distributed", "--noise", "ad", "--d1", "0.6", "--d2", "0.6", "--p1", "0.1", "--p2",
        "0.1", "--q1", "0.99", "--q2", "0.99",
    ]);
    assert!(v["concurrence_deviation"].as_f64().unwrap() <= 1e-9);
    assert!(v["success_deviation"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn deviations_absent_without_closed_forms() {
    let v = json(&["localize", "--noise", "dp", "--d1", "0.2"]);
    assert!(v.get("closed_form_concurrence").is_none());
    assert!(v.get("concurrence_deviation").is_none());
}

#[test]
fn impossible_postselection_warns_but_succeeds() {
    let v = json(&["localize", "--q1", "1", "--q2", "1"]);
    assert_eq!(v["success_prob"].as_f64(), Some(0.0));
    assert!(v["concurrence"].is_null());
    assert!(v["warning"].as_str().unwrap().contains("impossible"));
}

#[test]
fn json_round_trips_byte_for_byte() {
    let out = entloc(&["localize", "--strategy", "local", "--p3", "0.3", "--q3", "0.6", "--noise", "ad", "--d1", "0.2"]);
    let text = stdout(&out);
    let v: Value = serde_json::from_str(&text).unwrap();
    let mut again = serde_json::to_string_pretty(&v).unwrap();
    again.push('\n');
    assert_eq!(text, again);
}

#[test]
fn usage_errors_exit_with_two() {
    let cases: [&[&str]; 6] = [
        &["localize", "--p1", "1.5"],
        &["localize", "--noise", "loud"],
        &["localize", "--initial", "w:0,0,0"],
        &["sweep", "--figure", "fig9"],
        &["frobnicate"],
        &["pareto", "--density", "4"],
    ];
    for args in cases {
        let out = entloc(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let err = String::from_utf8(entloc(&["localize", "--p1", "1.5"]).stderr).unwrap();
    assert!(err.contains("--p1"));
    let err = String::from_utf8(entloc(&["sweep", "--figure", "fig9"]).stderr).unwrap();
    assert!(err.contains("fig1a") && err.contains("fig4b"));
}

#[test]
fn params_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.txt");
    std::fs::write(&path, "strategy=local\np3=0.99\nq3=0.1\n").unwrap();
    let p = path.to_str().unwrap();
    let v = json(&["localize", "--params", p, "--q3", "0.5"]);
    assert_eq!(v["params"]["q3"].as_f64(), Some(0.5));
    assert_eq!(v["params"]["strategy"].as_str(), Some("local"));
    assert!(v["concurrence"].as_f64().unwrap() >= 0.98);
}

#[test]
fn w_initial_records_normalisation() {
    let v = json(&["localize", "--initial", "w:1,1,1"]);
    assert!((v["initial_normalization"].as_f64().unwrap() - 3f64.sqrt()).abs() < 1e-12);
    assert!((v["concurrence"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn sweep_preset_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig2a.csv");
    let out = entloc(&["sweep", "--figure", "fig2a", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(Path::new(&path)).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 32 * 32 + 1);
    assert_eq!(lines[0], "d1,d2,concurrence,success_prob,closed_form_concurrence,deviation");
    assert!(lines[1].starts_with("0.0,0.0,0.5,1.0,0.5,"));
    assert!(!csv.contains('\r'));
}

#[test]
fn fig1b_maximum_at_strongest_weak_measurement() {
    let csv = stdout(&entloc(&["sweep", "--figure", "fig1b"]));
    let rows: Vec<Vec<f64>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').take(3).map(|x| x.parse().unwrap()).collect())
        .collect();
    let max = rows.iter().map(|r| r[2]).fold(f64::NEG_INFINITY, f64::max);
    assert!(rows.iter().any(|r| r[2] == max && r[0] == 0.99));
}

#[test]
fn custom_sweep_with_pair_columns() {
    let csv = stdout(&entloc(&[
        "sweep", "--axis", "q=0:0.99:5", "--p1", "0.1", "--p2", "0.1", "--outputs", "concurrence,c13,c23",
    ]));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("q,concurrence,c13,c23"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn verify_small_grid_passes() {
    let out = entloc(&["verify", "--grid", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("result: PASS"));
    assert!(text.contains("local_two_step_success") && text.contains("INFO"));
    assert!(text.contains("joint=0.5 two_step_product=0.375"));
}

#[test]
fn optimize_with_min_success() {
    let v = json(&["optimize", "--strategy", "distributed", "--p1", "0.5", "--p2", "0.5", "--min-success", "0.3"]);
    assert_eq!(v["status"].as_str(), Some("optimal"));
    assert!(v["success_prob"].as_f64().unwrap() >= 0.3);
    assert!(v["optimum"]["q1"].is_number() && v["optimum"]["q2"].is_number());
}

#[test]
fn optimize_reports_infeasibility() {
    let out = entloc(&["optimize", "--p1", "0.9", "--p2", "0.9", "--which", "q1", "--min-success", "0.99"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"].as_str(), Some("infeasible"));
}

#[test]
fn optimize_local_under_depolarizing() {
    let local = json(&["optimize", "--strategy", "local", "--noise", "dp", "--d1", "0.2", "--d2", "0.2"]);
    assert!(local["optimum"]["q3"].is_number());

    // With a weak measurement of matching strength on each side.
    let local = json(&[
        "optimize", "--strategy", "local", "--p3", "0.5", "--noise", "dp", "--d1", "0.2", "--d2", "0.2",
    ]);
    let dist = json(&[
        "optimize", "--strategy", "distributed", "--p1", "0.5", "--p2", "0.5", "--noise", "dp", "--d1", "0.2", "--d2",
        "0.2",
    ]);
    assert!(local["concurrence"].as_f64().unwrap() >= dist["concurrence"].as_f64().unwrap());
}

#[test]
fn pareto_endpoints() {
    let v = json(&["pareto", "--strategy", "distributed", "--free", "q", "--density", "64"]);
    let points = v["points"].as_array().unwrap();
    let first = &points[0];
    assert_eq!(first["values"]["q"].as_f64(), Some(0.0));
    assert!((first["concurrence"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((first["success_prob"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(points.last().unwrap()["values"]["q"].as_f64(), Some(0.999));
}

#[test]
fn repeated_runs_are_identical() {
    for args in [
        &["sweep", "--figure", "fig2b"][..],
        &["pareto", "--free", "q1,q2", "--density", "10"][..],
        &["verify", "--grid", "3", "--format", "json"][..],
    ] {
        assert_eq!(entloc(args).stdout, entloc(args).stdout, "{args:?}");
    }
}
