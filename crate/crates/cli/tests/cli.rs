use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn mmq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmq")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn hexagon(dir: &TempDir) -> PathBuf {
    let p = dir.path().join("hex.json");
    let out = mmq(&["example", "hexagon", "--out", p.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eval_reproduces_worked_values() {
    let dir = TempDir::new().unwrap();
    let hex = hexagon(&dir);
    for (d, r) in [("0,1", 2.0), ("0,-1", 2.5), ("0,7", 2.0)] {
        let out = mmq(&["eval", "--instance", s(&hex), "--direction", d]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let v = json(&out);
        assert!((v["r"].as_f64().unwrap() - r).abs() <= 1e-9, "{d}: {v}");
    }
    let out = mmq(&["eval", "--instance", s(&hex), "--direction", "0,0"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("zero direction"));
    assert_eq!(code(&mmq(&["eval", "--instance", s(&hex), "--direction", "0,1,2"])), 2);
}

#[test]
fn sweep_writes_profile_events_and_report() {
    let dir = TempDir::new().unwrap();
    let hex = hexagon(&dir);
    let csv_path = dir.path().join("profile.csv");
    let out = mmq(&["sweep", "--instance", s(&hex), "--out", s(&csv_path), "--samples-per-arc", "60"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));

    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        ["beta", "dx", "dy", "r", "N", "M", "tN", "xM_is_x1", "faceN", "faceM", "faceD", "arc_id", "is_event_adjacent"]
    );
    let max_r = reader
        .records()
        .map(|r| r.unwrap()[3].parse::<f64>().unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((max_r - 2.5).abs() <= 1e-9, "max r = {max_r}");

    let events: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("profile.events.json")).unwrap()).unwrap();
    let hit = events.as_array().unwrap().iter().any(|e| {
        e["ray_kind"] == "d-exit"
            && e["vertex"] == serde_json::json!([3.0, 0.0])
            && (e["beta"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() <= 1e-9
    });
    assert!(hit, "no d-exit event at π/2 for (3,0): {events}");

    let lemmas: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("profile.lemmas.json")).unwrap()).unwrap();
    assert!(lemmas.as_object().unwrap().values().all(|c| c["pass"] == true), "{lemmas}");
}

#[test]
fn invalid_instances_exit_3_with_report() {
    let dir = TempDir::new().unwrap();
    // −x2 = (0,−5) is outside Y
    let bad = write(
        &dir,
        "bad.json",
        r#"{"dimension": 2, "X": {"x1": [0, -0.5], "x2": [0, 5]},
            "Y": {"vertices": [[3,0],[1,2],[-1,2],[-3,0],[-1,-2],[1,-2]]}}"#,
    );
    let csv_path = dir.path().join("p.csv");
    let out = mmq(&["sweep", "--instance", s(&bad), "--out", s(&csv_path)]);
    assert_eq!(code(&out), 3);
    let report = json(&out);
    assert_eq!(report["ok"], false, "{report}");
    assert_eq!(code(&mmq(&["eval", "--instance", s(&bad), "--direction", "0,1"])), 3);
    assert_eq!(code(&mmq(&["argmax", "--instance", s(&bad)])), 3);
}

#[test]
fn malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let garbage = write(&dir, "g.json", "{ not json");
    assert_eq!(code(&mmq(&["argmax", "--instance", s(&garbage)])), 2);
    let extra = write(
        &dir,
        "extra.json",
        r#"{"dimension": 2, "X": {"x1": [0, -0.5], "x2": [0, 1]}, "Y": {"vertices": [[1,1],[-1,1],[-1,-1],[1,-1]]}, "Z": 1}"#,
    );
    assert_eq!(code(&mmq(&["argmax", "--instance", s(&extra)])), 2);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&mmq(&["argmax", "--instance", s(&missing)])), 2);
    assert_eq!(code(&mmq(&["argmax", "--instance", s(&missing), "--frobnicate"])), 2);
}

#[test]
fn argmax_on_hexagon_symmetric_and_cube() {
    let dir = TempDir::new().unwrap();
    let hex = hexagon(&dir);
    let v = json(&mmq(&["argmax", "--instance", s(&hex)]));
    assert_eq!(v["d_star"], serde_json::json!([0.0, -1.0]));
    assert!((v["r_star"].as_f64().unwrap() - 2.5).abs() <= 1e-9);
    assert_eq!(v["tie"], false);

    let sym = write(
        &dir,
        "sym.json",
        r#"{"dimension": 2, "X": {"x1": [0, -0.5], "x2": [0, 0.5]},
            "Y": {"vertices": [[3,0],[1,2],[-1,2],[-3,0],[-1,-2],[1,-2]]}}"#,
    );
    assert_eq!(json(&mmq(&["argmax", "--instance", s(&sym)]))["tie"], true);

    let mut faces = Vec::new();
    for i in 0..3 {
        for sign in [1.0, -1.0] {
            let mut a = [0.0; 3];
            a[i] = sign;
            faces.push(serde_json::json!({"a": a, "b": 2.0}));
        }
    }
    let corners: Vec<[f64; 3]> = (0..8)
        .map(|m| [0, 1, 2].map(|b| if m >> b & 1 == 1 { 2.0 } else { -2.0 }))
        .collect();
    let cube = serde_json::json!({
        "dimension": 3,
        "X": {"x1": [0, 0, -0.5], "x2": [0, 0, 1]},
        "Y": {"vertices": corners, "halfspaces": faces},
    });
    let cube = write(&dir, "cube.json", &cube.to_string());
    let v = json(&mmq(&["argmax", "--instance", s(&cube)]));
    assert_eq!(v["d_star"], serde_json::json!([0.0, 0.0, -1.0]));
    assert!((v["r_star"].as_f64().unwrap() - 2.5).abs() <= 1e-9, "{v}");
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let hex = hexagon(&dir);
    let report_path = dir.path().join("report.json");
    let out = mmq(&["verify", "--instance", s(&hex), "--out", s(&report_path)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["failures"], serde_json::json!([]));

    let out = mmq(&["verify", "--instance", s(&hex), "--inject-fault", "denominator-max"]);
    assert_eq!(code(&out), 5);

    let out = mmq(&["verify", "--random", "4", "--seed", "42", "--directions", "36", "--grid", "101", "--sweep-samples", "1200", "--grid-step", "0.01"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["trials"], 4);

    assert_eq!(code(&mmq(&["verify", "--random", "4"])), 2);
}

#[test]
fn example_round_trips_and_validates() {
    let dir = TempDir::new().unwrap();
    let hex = hexagon(&dir);
    let text = std::fs::read_to_string(&hex).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let mut verts: Vec<(f64, f64)> = v["Y"]["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_f64().unwrap(), p[1].as_f64().unwrap()))
        .collect();
    verts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(verts, [(-3.0, 0.0), (-1.0, -2.0), (-1.0, 2.0), (1.0, -2.0), (1.0, 2.0), (3.0, 0.0)]);
    assert_eq!(v["X"]["x1"], serde_json::json!([0.0, -0.5]));
    assert_eq!(v["X"]["x2"], serde_json::json!([0.0, 1.0]));
    // the written file passes validation: every command accepts it
    assert_eq!(code(&mmq(&["argmax", "--instance", s(&hex)])), 0);
    assert_eq!(code(&mmq(&["example", "dodecahedron"])), 2);
}

#[test]
fn bench_reports_agreeing_answers() {
    let dir = TempDir::new().unwrap();
    let hex = hexagon(&dir);
    let out = mmq(&["bench", "--instance", s(&hex), "--naive-grid", "60", "--runs", "1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["within_bound"], true, "{v}");
    assert!(v["speedup"].as_f64().unwrap() > 1.0);
    assert!((v["analytic"]["r_star"].as_f64().unwrap() - 2.5).abs() <= 1e-9);
}

#[test]
fn commands_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let hex = hexagon(&dir);
    let a = mmq(&["eval", "--instance", s(&hex), "--direction", "0.3,-0.8"]);
    let b = mmq(&["eval", "--instance", s(&hex), "--direction", "0.3,-0.8"]);
    assert_eq!(a.stdout, b.stdout);
}
