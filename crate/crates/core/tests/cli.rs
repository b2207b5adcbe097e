use std::fs;
use std::process::{Command, Output};

use tempfile::tempdir;

const HEADER: &str = "algorithm,n,E,labelA,labelB,startA,startB,tau,met,time,cost";

fn rendezvous(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rendezvous"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn simulate_summary_and_csv() {
    let args = ["simulate", "--ring", "5", "--alg", "cheap-sim", "--labels", "1,2", "--starts", "0,2", "--tau", "1"];
    let o = rendezvous(&args);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("met=true time=2 cost=2"), "{}", stdout(&o));

    let o = rendezvous(&[&args[..], &["--csv"]].concat());
    assert_eq!(stdout(&o), format!("{HEADER}\ncheap-sim,5,4,1,2,0,2,1,true,2,2\n"));
}

#[test]
fn simulate_writes_position_log() {
    let dir = tempdir().unwrap();
    let log = dir.path().join("positions.csv");
    let o = rendezvous(&[
        "simulate", "--ring", "5", "--alg", "cheap-sim", "--labels", "1,2", "--starts", "0,2", "--log",
        log.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&log).unwrap(), "round,nodeA,nodeB\n1,1,2\n2,2,2\n");
}

#[test]
fn simulate_config_file_with_flag_override() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "ring = 5\nalg = \"cheap-sim\"\nlabels = [1, 2]\nstarts = [0, 2]\n").unwrap();
    let o = rendezvous(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("met=true time=2 cost=2"), "{}", stdout(&o));
    let o = rendezvous(&["simulate", "--config", cfg.to_str().unwrap(), "--starts", "0,3"]);
    assert!(stdout(&o).starts_with("met=true time=3 cost=3"), "{}", stdout(&o));
}

#[test]
fn simulate_on_graph_file() {
    let dir = tempdir().unwrap();
    let g = dir.path().join("triangle.txt");
    fs::write(&g, "n 3\n0: (1 1) (2 0)\n1: (2 1) (0 0)\n2: (0 1) (1 0)\n").unwrap();
    let o = rendezvous(&["graph", "validate", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "valid: 3 nodes, 3 edges");
    let o = rendezvous(&["simulate", "--graph", g.to_str().unwrap(), "--alg", "cheap", "--labels", "2,1", "--tau", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("met=true"));
}

#[test]
fn invalid_graph_file_is_rejected() {
    let dir = tempdir().unwrap();
    let g = dir.path().join("bad.txt");
    fs::write(&g, "n 3\n0: (1 0)\n1: (0 0)\n2:\n").unwrap();
    let o = rendezvous(&["graph", "validate", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("error"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(rendezvous(&["simulate", "--ring", "5", "--alg", "cheap"]).status.code(), Some(1));
    assert_eq!(rendezvous(&["simulate", "--ring", "5", "--alg", "cheap", "--labels", "1,2,3"]).status.code(), Some(1));
    assert_eq!(rendezvous(&["sweep", "--alg", "cheap"]).status.code(), Some(1));
    assert_eq!(rendezvous(&["analyze", "--alg", "cheap", "--ring", "10", "--L", "3"]).status.code(), Some(1));
    assert_eq!(rendezvous(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(rendezvous(&["--help"]).status.code(), Some(0));
}

#[test]
fn sweep_to_file_and_stdout_agree() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("runs.csv");
    let args = ["sweep", "--alg", "cheap", "--graphs", "ring:3..4,path:3", "--L", "3"];
    let o = rendezvous(&[&args[..], &["--out", out.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("# bound for cheap with L=3"), "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with("OK"));
    let file = fs::read_to_string(&out).unwrap();
    assert_eq!(file.lines().next(), Some(HEADER));

    let o = rendezvous(&args);
    assert_eq!(stdout(&o), file);
    assert!(stderr(&o).contains("violations=0"));
    // ring:3 with E=2 and tau 1..=4, ring:4 with E=3 and tau 1..=5, path:3 with E=24 and tau 1..=26
    assert_eq!(file.lines().count() - 1, 6 * (6 * 4 + 12 * 5 + 6 * 26));
}

#[test]
fn sweep_config_file_and_violation_exit() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    fs::write(&cfg, "algorithm = \"fwr:w=2\"\ngraphs = [\"ring:3\"]\nlabels = 8\ntau = \"1\"\n").unwrap();
    let out = dir.path().join("runs.csv");
    let o = rendezvous(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("VIOLATION"));

    let o = rendezvous(&["sweep", "--config", cfg.to_str().unwrap(), "--alg", "cheap", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(fs::read_to_string(&out).unwrap().lines().nth(1).unwrap().starts_with("cheap,3,2,"));
}

#[test]
fn sweep_cap_refuses_large_grids() {
    let o = rendezvous(&["sweep", "--alg", "cheap", "--graphs", "ring:3..8", "--L", "8", "--cap", "100"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("100"), "{}", stderr(&o));
}

#[test]
fn analyze_text_and_json() {
    let o = rendezvous(&["analyze", "--alg", "cheap-sim", "--ring", "12", "--L", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS trim-neutrality"));

    let o = rendezvous(&["analyze", "--alg", "cheap-sim", "--ring", "12", "--L", "4", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["n"], 12);
    let facts = report["facts"].as_array().unwrap();
    assert_eq!(facts.len(), 12);
    assert!(facts.iter().all(|f| f["passed"] == true));
    assert_eq!(report["labels"].as_array().unwrap().len(), 4);
}
