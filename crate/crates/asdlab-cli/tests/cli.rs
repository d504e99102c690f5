use std::process::{Command, Output};

use asdlab::asdcheck::CongruenceReport;

fn asdlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asdlab")).args(args).env_remove("ASDLAB_CACHE").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

const SMALL: [&str; 9] = ["scenario", "unit-root-w3-f", "--p", "5,13", "--mmax", "6", "--smax", "2", "--coeffs"];

fn small_scenario(extra: &[&str]) -> Output {
    let mut args: Vec<&str> = SMALL.to_vec();
    args.push("400");
    args.extend_from_slice(extra);
    asdlab(&args)
}

#[test]
fn expand_theta2_matches_sums_of_two_squares() {
    let o = asdlab(&["expand", "theta2", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1,4,4,0,4,8");
}

#[test]
fn expand_json_uses_cache_schema_fields() {
    let o = asdlab(&["--json", "expand", "theta2", "--n", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["form_id"], "theta2");
    assert_eq!(v["mu"], 1);
    assert_eq!(v["lo"], 0);
    assert_eq!(v["trunc"], 4);
    assert_eq!(v["coeffs"], serde_json::json!(["1", "4", "4", "0"]));
}

#[test]
fn identities_all_pass() {
    let o = asdlab(&["identities", "--upto", "200"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("8/8 pass"));
}

#[test]
fn scenario_json_round_trips_and_passes() {
    let o = small_scenario(&["--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rep: CongruenceReport = serde_json::from_str(&text).unwrap();
    assert!(rep.summary.pass > 0);
    assert_eq!(rep.summary.fail, 0);
    assert_eq!(rep.params.p, vec![5, 13]);
    let again = serde_json::to_string_pretty(&rep).unwrap();
    assert_eq!(serde_json::from_str::<CongruenceReport>(&again).unwrap(), rep);
}

#[test]
fn table_and_json_carry_the_same_records() {
    let rep: CongruenceReport = serde_json::from_str(&stdout(&small_scenario(&["--json"]))).unwrap();
    let table = stdout(&small_scenario(&[]));
    assert_eq!(table, rep.to_table());
    let rows = table.lines().filter(|l| l.ends_with("PASS") || l.ends_with("FAIL")).count();
    assert_eq!(rows, rep.checks.len() + rep.facts.len());
}

#[test]
fn cache_hit_and_miss_give_identical_output() {
    let dir = std::env::temp_dir().join(format!("asdlab-cli-cache-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let d = dir.to_str().unwrap();
    let miss = asdlab(&["--cache", d, "expand", "E4", "--n", "30"]);
    assert_eq!(miss.status.code(), Some(0));
    assert!(std::fs::read_dir(&dir).unwrap().next().is_some(), "cache file written");
    let hit = Command::new(env!("CARGO_BIN_EXE_asdlab"))
        .args(["expand", "E4", "--n", "30"])
        .env("ASDLAB_CACHE", d)
        .output()
        .unwrap();
    assert_eq!(stdout(&hit), stdout(&miss));
    assert_eq!(stdout(&hit), stdout(&asdlab(&["expand", "E4", "--n", "30"])));
    let first = small_scenario(&["--json", "--cache", d]);
    let second = small_scenario(&["--json", "--cache", d]);
    assert_eq!(stdout(&first), stdout(&second));
    assert_eq!(stdout(&first), stdout(&small_scenario(&["--json"])));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(asdlab(&["scenario", "no-such-scenario"]).status.code(), Some(2));
    assert_eq!(asdlab(&["expand", "no_such_form"]).status.code(), Some(2));
    assert_eq!(asdlab(&["count", "cubic:1", "--p", "5"]).status.code(), Some(2));
    assert_eq!(asdlab(&["scenario", "unit-root-w3-f", "--p", "4"]).status.code(), Some(2));
    assert_eq!(asdlab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn computation_errors_exit_one_with_structured_message() {
    let o = asdlab(&["--json", "count", "short:0,1", "--p", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&String::from_utf8_lossy(&o.stderr)).unwrap();
    assert_eq!(v["error"]["kind"], "BadReduction");
}

#[test]
fn count_and_unit_root_agree_with_hand_values() {
    // y² = x³ + 1 over F_5: x ∈ {0, 2, 4} give 2 + 1 + 2 points, so 6 with infinity.
    let o = asdlab(&["count", "short:0,1", "--p", "5", "--r", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("p=5 a_p=0 #E(F_p)=6 #E(F_5^2)=36"));
    // a_13 = 6 for the u = 2 Weierstrass curve.
    let o = asdlab(&["--json", "unitroot", "weierstrass:2", "--p", "13", "--precision", "4"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mu: i64 = v["unit_root"].as_str().unwrap().parse().unwrap();
    let m = 13i64.pow(4);
    assert_eq!((mu * mu - 6 * mu + 13).rem_euclid(m), 0);
    assert_eq!(asdlab(&["unitroot", "short:0,1", "--p", "5"]).status.code(), Some(1));
}

#[test]
fn eigenbasis_reproduces_known_classes() {
    let o = asdlab(&["eigenbasis", "weierstrass:2", "--pi", "2i"]);
    assert!(stdout(&o).contains("other (c1, c2) = (1, 4)"));
    let o = asdlab(&["--json", "eigenbasis", "legendre:17-12*sqrt(2)", "--pi", "2i"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["other"][1], "-3 + (2)·√(2)");
}

#[test]
fn picheck_reaches_two_root_two_over_pi() {
    let o = asdlab(&["--json", "picheck", "17-12√2", "1", "2√2-3", "--terms", "40"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["a"], "6");
    assert_eq!(v["lambda"], "-1/8");
    let sum = v["partial_sum"].as_f64().unwrap();
    assert!((sum - 2.0 * 2f64.sqrt() / std::f64::consts::PI).abs() < 1e-12);
}
