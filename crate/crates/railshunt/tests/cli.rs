//! End-to-end runs of the command-line binary over its subcommands.

use std::process::Command;

fn railshunt(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_railshunt"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn generate_solve_and_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let instance = dir.path().join("instance.json");
    let plan = dir.path().join("plan.json");
    let model = dir.path().join("model.mps");

    let out = railshunt(&[
        "gen",
        "--seed",
        "5",
        "--min-kc",
        "2",
        "--out",
        instance.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");

    let out = railshunt(&[
        "solve",
        instance.to_str().unwrap(),
        "--exact",
        "--stats",
        "--out",
        plan.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let stats = String::from_utf8_lossy(&out.stderr);
    assert!(stats.contains("\"states\""), "{stats}");

    let out = railshunt(&[
        "mip",
        "check",
        instance.to_str().unwrap(),
        plan.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    assert!(String::from_utf8_lossy(&out.stdout).contains("feasible: true"));

    let out = railshunt(&[
        "mip",
        "export",
        instance.to_str().unwrap(),
        "--out",
        model.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = std::fs::read_to_string(&model).unwrap();
    assert!(text.starts_with("NAME"));
    assert!(text.contains("SHUNTCOST"));
    assert!(text.trim_end().ends_with("ENDATA"));
}

#[test]
fn heuristic_and_horizon_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let instance = dir.path().join("instance.json");
    railshunt(&[
        "gen",
        "--seed",
        "9",
        "--mixed",
        "--min-kc",
        "2",
        "--out",
        instance.to_str().unwrap(),
    ]);

    let out = railshunt(&["solve", instance.to_str().unwrap(), "--argdp", "--stats"]);
    assert!(out.status.success(), "{out:?}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("reduction_pct"));

    let out = railshunt(&["horizon", instance.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("T = "));
}

#[test]
fn sequence_tools() {
    let out = railshunt(&["conflicts", "2 4 3 6 1 8 7 5"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("7 conflicts"), "{text}");

    let out = railshunt(&["conflicts", "--flavor", "rspsc", "2 4 3 6 1 8 7 5"]);
    assert!(out.status.success());

    let out = railshunt(&["transform", "2 4 3 6 1 8 7 5"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("4 1d 7 6 2d 9 3 5v 12 11 8 10v"), "{text}");

    let dir = tempfile::tempdir().unwrap();
    let instance = dir.path().join("cert.json");
    let out = railshunt(&[
        "rspsc-gen",
        "3 1 5 2 4",
        "--k",
        "4",
        "--out",
        instance.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let out = railshunt(&["solve", instance.to_str().unwrap(), "--exact"]);
    assert!(out.status.success());
    let plan: railshunt::yard::Plan =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(plan.total_cost, 5.0);
}

#[test]
fn count_states_workflow() {
    let out = railshunt(&[
        "count-states",
        "--tracks",
        "9",
        "--kc",
        "6",
        "--groups",
        "9",
        "--free",
        "3",
        "--per-departure",
        "5,1,6",
        "--cut-free",
        "1",
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("|V| = 8792582401"), "{text}");
    assert!(text.contains("decrease = 94.14%"), "{text}");
}

#[test]
fn bench_smoke() {
    let out = railshunt(&[
        "bench",
        "--mixed",
        "1",
        "--non-mixed",
        "1",
        "--seed",
        "3",
        "--exact-max-states",
        "200000",
        "--format",
        "csv",
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().count() >= 3, "{text}");
    assert!(text.starts_with("id,seed,class"), "{text}");
}
