use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const EXAMPLE: &str = r#"
pursuers = [{ x = -1.5, y = 4.2, speed = 1.0 }, { x = 9.3, y = 4.5, speed = 1.04 }]
evaders = [{ x = 4.1, y = 11.0, speed = 0.81 }, { x = 5.5, y = 12.2, speed = 0.77 }]
seed = 7
"#;

const RESCUE: &str = r#"
pursuers = [{ x = -3.4, y = 1.6, speed = 1.0 }, { x = 3.6, y = 2.4, speed = 1.0 }]
evaders = [{ x = 0.0, y = 3.8, speed = 0.8 }]
"#;

const THREE_ON_THREE: &str = r#"
pursuers = [
  { x = -7.6, y = 7.1, speed = 1.0 },
  { x = 0.9, y = 3.8, speed = 1.0 },
  { x = -2.6, y = 4.0, speed = 1.0 },
]
evaders = [
  { x = -1.3, y = 9.3, speed = 0.6 },
  { x = -1.7, y = 10.7, speed = 0.6 },
  { x = 6.9, y = 10.7, speed = 0.6 },
]
"#;

fn scenario(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn bddg(args: &[&str], file: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bddg")).args(args).arg(file).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Reads `key=value` pairs from the simulate summary line.
fn summary(out: &Output, key: &str) -> f64 {
    let text = String::from_utf8_lossy(&out.stdout);
    text.split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .parse()
        .unwrap()
}

#[test]
fn solve_reports_the_reference_value() {
    let dir = TempDir::new().unwrap();
    let out = bddg(&["solve"], &scenario(&dir, "ex.toml", EXAMPLE));
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert!((r["value"].as_f64().unwrap() - 10.696).abs() < 1e-3);
    assert_eq!(r["optimal_id"], 1);
    assert_eq!(r["assignments"][0]["pairs"], serde_json::json!({"0": [0], "1": [1]}));
    assert!((r["assignments"][1]["value"].as_f64().unwrap() - 8.288).abs() < 1e-3);
    assert!((r["dispersal_gap"].as_f64().unwrap() - 2.408).abs() < 2e-3);
    assert_eq!(r["game_of_kind"]["winner"], "pursuers");
    let aim = &r["plans"][0]["aimpoint"];
    assert!((aim["x"].as_f64().unwrap() - 14.784).abs() < 1e-3);
    assert!((aim["y"].as_f64().unwrap() - 3.225).abs() < 1e-3);
}

#[test]
fn solve_outside_the_winning_region_exits_2() {
    let dir = TempDir::new().unwrap();
    let body = "pursuers = [{ x = 0.0, y = 10.0, speed = 1.0 }]\nevaders = [{ x = 0.0, y = 1.0, speed = 0.9 }]\n";
    let out = bddg(&["solve"], &scenario(&dir, "lost.toml", body));
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["value"], Value::Null);
    assert_eq!(r["game_of_kind"]["winner"], "evaders-partial");
    assert_eq!(r["game_of_kind"]["unstoppable_evaders"], serde_json::json!([0]));
}

#[test]
fn malformed_scenarios_exit_1_with_a_diagnostic() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("pursuers = [{ x = 0.0, y = 1.0 }]\nevaders = [{ x = 0.0, y = 3.0, speed = 0.5 }]\n", "speed"),
        (&format!("{EXAMPLE}\ncapture_raduis = 0.1\n"), "capture_raduis"),
        ("pursuers = [{ x = 0.0, y = 1.0, speed = 1.0 }]\nevaders = [{ x = 0.0, y = 3.0, speed = 0.5 }, { x = 1.0, y = 3.0, speed = 0.5 }]\n", "at least as many pursuers"),
        ("pursuers = [{ x = 0.0, y = -1.0, speed = 1.0 }]\nevaders = [{ x = 0.0, y = 3.0, speed = 0.5 }]\n", "pursuers[0].y"),
        ("pursuers = [{ x = 0.0, y = 1.0, speed = 0.0 }]\nevaders = [{ x = 0.0, y = 3.0, speed = 0.5 }]\n", "pursuers[0].speed"),
    ];
    for (k, (body, needle)) in cases.iter().enumerate() {
        let out = bddg(&["solve"], &scenario(&dir, &format!("bad{k}.toml"), body));
        assert_eq!(out.status.code(), Some(1), "case {k}");
        assert!(stderr(&out).contains(needle), "case {k}: {}", stderr(&out));
    }
    let out = bddg(&["solve"], &dir.path().join("missing.toml"));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn simulate_writes_trajectory_and_events() {
    let dir = TempDir::new().unwrap();
    let file = scenario(&dir, "ex.toml", EXAMPLE);
    let csv = dir.path().join("traj.csv");
    let events = dir.path().join("events.json");
    let out = bddg(
        &["simulate", "--out", csv.to_str().unwrap(), "--events-out", events.to_str().unwrap()],
        &file,
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!((summary(&out, "payoff") - 10.696).abs() < 1e-2);
    assert!((summary(&out, "V") - 10.696).abs() < 1e-3);
    assert!(summary(&out, "payoff-V").abs() < 1e-2);

    let table = std::fs::read_to_string(&csv).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("t,P1x,P1y,P2x,P2y,E1x,E1y,E2x,E2y"));
    assert_eq!(lines.next(), Some("0,-1.5,4.2,9.3,4.5,4.1,11,5.5,12.2"));
    assert!(lines.all(|l| l.split(',').count() == 9));

    let ev: Value = serde_json::from_str(&std::fs::read_to_string(&events).unwrap()).unwrap();
    let ev = ev.as_array().unwrap();
    assert_eq!(ev.len(), 2);
    for e in ev {
        assert_eq!(e["kind"], "capture");
        for key in ["t", "evader", "pursuers", "x", "y"] {
            assert!(!e[key].is_null(), "{key} missing in {e}");
        }
    }
}

#[test]
fn simulate_deviation_policies() {
    let dir = TempDir::new().unwrap();
    let file = scenario(&dir, "ex.toml", EXAMPLE);
    let out = bddg(&["simulate", "--evader-policy", "wrong-lowest-point:2"], &file);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!((summary(&out, "payoff") - 16.632).abs() < 5e-2);

    let events = dir.path().join("events.json");
    let out = bddg(
        &[
            "simulate",
            "--pursuer-policy",
            "pure-pursuit",
            "--evader-policy",
            "fixed-assignment:1",
            "--events-out",
            events.to_str().unwrap(),
        ],
        &file,
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let ev: Value = serde_json::from_str(&std::fs::read_to_string(&events).unwrap()).unwrap();
    let reaches: Vec<_> = ev.as_array().unwrap().iter().filter(|e| e["kind"] == "border-reach").collect();
    assert_eq!(reaches.len(), 1);
    assert_eq!(reaches[0]["evader"], 0);

    let out = bddg(&["simulate", "--evader-policy", "fixed-heading:-90,-90"], &file);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(summary(&out, "payoff-V") > -5e-2);
}

#[test]
fn simulate_rejects_unknown_policies() {
    let dir = TempDir::new().unwrap();
    let file = scenario(&dir, "ex.toml", EXAMPLE);
    let out = bddg(&["simulate", "--pursuer-policy", "greedy"], &file);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("fixed-assignment:<k>"), "{}", stderr(&out));
    let out = bddg(&["simulate", "--evader-policy", "pure-pursuit"], &file);
    assert_eq!(out.status.code(), Some(1));
    let out = bddg(&["simulate", "--evader-policy", "fixed-assignment:9"], &file);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_is_deterministic_and_passes() {
    let dir = TempDir::new().unwrap();
    let file = scenario(&dir, "ex.toml", EXAMPLE);
    let a = bddg(&["verify", "--samples", "200"], &file);
    let b = bddg(&["verify", "--samples", "200"], &file);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let r = json(&a);
    assert_eq!(r["evaluated"], 200);
    assert_eq!(r["passed"], true);
    assert!(r["max_hji"].as_f64().unwrap() <= 1e-6);
    assert!(r["max_gradient_error"].as_f64().unwrap() <= 1e-5);

    let c = bddg(&["verify", "--samples", "200", "--seed", "8"], &file);
    assert_ne!(a.stdout, c.stdout);

    let empty = bddg(&["verify", "--samples", "0"], &file);
    assert_eq!(empty.status.code(), Some(0));
    assert_eq!(json(&empty)["evaluated"], 0);
}

#[test]
fn verify_checks_identities_on_a_cooperative_scenario() {
    let dir = TempDir::new().unwrap();
    let body = "pursuers = [{ x = 0.3, y = 0.1, speed = 1.0 }, { x = 9.7, y = 0.4, speed = 1.25 }]\n\
                evaders = [{ x = 5.2, y = 4.1, speed = 0.6 }]\n";
    let out = bddg(&["verify", "--samples", "100"], &scenario(&dir, "flank.toml", body));
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert!(r["identity_checks"].as_u64().unwrap() > 0);
    assert!(r["max_identity_residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn oracle_agrees_with_the_closed_form() {
    let dir = TempDir::new().unwrap();
    for (name, body) in [
        ("rescue.toml", RESCUE),
        ("ex.toml", EXAMPLE),
        ("solo.toml", "pursuers = [{ x = 0.0, y = 0.0, speed = 1.0 }]\nevaders = [{ x = 0.0, y = 3.0, speed = 0.5 }]\n"),
    ] {
        let out = bddg(&["oracle"], &scenario(&dir, name, body));
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stderr(&out));
        let r = json(&out);
        assert_eq!(r["passed"], true);
        for e in r["evaders"].as_array().unwrap() {
            assert!(e["error"].as_f64().unwrap() <= 2e-3);
        }
    }
    let rescue = json(&bddg(&["oracle"], &scenario(&dir, "rescue.toml", RESCUE)));
    assert_eq!(rescue["evaders"][0]["pursuers"], serde_json::json!([0, 1]));

    let out = bddg(&["oracle", "--resolution", "0"], &scenario(&dir, "ex.toml", EXAMPLE));
    assert_eq!(out.status.code(), Some(1));
    let out = bddg(&["oracle", "--resolution", "-1"], &scenario(&dir, "ex.toml", EXAMPLE));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn enumerate_lists_every_assignment() {
    let dir = TempDir::new().unwrap();
    let out = bddg(&["enumerate"], &scenario(&dir, "3v3.toml", THREE_ON_THREE));
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let list = json(&out)["assignments"].as_array().unwrap().clone();
    assert_eq!(list.len(), 6);
    assert_eq!(list.iter().filter(|a| a["feasible"] == true).count(), 4);
    let ids: Vec<_> = list.iter().map(|a| a["id"].as_u64().unwrap()).collect();
    assert_eq!(ids, (1..=6).collect::<Vec<_>>());
}
