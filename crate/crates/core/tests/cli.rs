use std::path::Path;
use std::process::{Command, Output};

fn blockbench(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blockbench"))
        .args(args)
        .current_dir(dir)
        .env("BLOCKBENCH_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = blockbench(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn list_and_eval() {
    let dir = tempfile::tempdir().unwrap();
    let list = ok(dir.path(), &["list"]);
    assert_eq!(list.lines().count(), 15);
    let x = "0".repeat(10) + &"1".repeat(30);
    let eval = ok(dir.path(), &["eval", "--problem", "F7", &x]);
    assert!(eval.contains("f = 3"), "{eval}");
    assert!(eval.contains("[3, 13, 13, 13]"), "{eval}");
    let bad = blockbench(dir.path(), &["eval", "--problem", "F11", &x]);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("F10"));
}

#[test]
fn run_aggregate_plot_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{
  "problem": "F9",
  "n": 20,
  "m": 4,
  "algo": ["ea", "var_ea"],
  "runs": 5,
  "budget": 30000,
  "seed": 7,
  "output": "out"
}"#;
    std::fs::write(dir.path().join("cfg.json"), cfg).unwrap();
    ok(dir.path(), &["run", "-c", "cfg.json"]);
    let ea = dir.path().join("out/ea");
    let header = std::fs::read_to_string(ea.join("run_000.csv")).unwrap();
    assert!(header.starts_with("run,evals,best_f,v1,v2,v3,v4\n"));
    assert_eq!(std::fs::read_to_string(dir.path().join("out/config.json")).unwrap(), cfg);

    let before = std::fs::read(ea.join("summary.csv")).unwrap();
    ok(dir.path(), &["aggregate", "out/ea"]);
    assert_eq!(std::fs::read(ea.join("summary.csv")).unwrap(), before);

    ok(dir.path(), &["plot", "--kind", "lines", "--log-x", "out/ea/summary.csv", "out/var_ea/summary.csv", "-o", "a.svg"]);
    ok(dir.path(), &["plot", "--kind", "lines", "--log-x", "out/ea/summary.csv", "out/var_ea/summary.csv", "-o", "b.svg"]);
    let svg = std::fs::read(dir.path().join("a.svg")).unwrap();
    assert_eq!(svg, std::fs::read(dir.path().join("b.svg")).unwrap());
    assert!(String::from_utf8(svg).unwrap().contains("var_ea"));
}

#[test]
fn config_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\n  \"problem\": \"F1\",\n  \"runs\": -3\n}\n").unwrap();
    let out = blockbench(dir.path(), &["run", "-c", "bad.json"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json:3"), "{err}");
}

#[test]
fn landscape_outputs() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["landscape", "--problem", "F7", "--axis", "ones", "--out", "ones.csv"]);
    let ones = std::fs::read_to_string(dir.path().join("ones.csv")).unwrap();
    assert!(ones.starts_with("k,f\n0,"));
    assert!(ones.lines().any(|l| l == "40,52"));
    ok(dir.path(), &["landscape", "--problem", "BF2", "--n", "12", "--m", "3", "--axis", "objectives", "--svg", "bf2.svg"]);
    let objectives = std::fs::read_to_string(dir.path().join("BF2_objectives.csv")).unwrap();
    assert!(objectives.starts_with("y1,y2,pareto\n"));
    assert!(dir.path().join("bf2.svg").exists());
    let refused = blockbench(dir.path(), &["landscape", "--problem", "F1", "--n", "60", "--m", "6", "--axis", "distance"]);
    assert!(!refused.status.success());
}

#[test]
fn bi_and_table2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"problem": "BF5", "n": 16, "m": 4, "algo": ["gsemo", "moead"], "runs": 3, "seed": 2, "output": "bi"}"#;
    std::fs::write(dir.path().join("bi.json"), cfg).unwrap();
    ok(dir.path(), &["bi", "-c", "bi.json"]);
    let runs = std::fs::read_to_string(dir.path().join("bi/gsemo/runs.csv")).unwrap();
    assert!(runs.starts_with("run,seed,budget,evaluations_used,final_hv,archive_size\n"));
    let log = std::fs::read_to_string(dir.path().join("bi/moead/run_000.csv")).unwrap();
    assert!(log.starts_with("run,evals,best_f,v1,v2,v3,v4,y1,y2,hv\n"));

    let out = ok(dir.path(), &["table2", "--n", "16", "--runs", "3", "--budget", "20000", "--out", "t2"]);
    assert!(out.contains("rank"));
    let wide = std::fs::read_to_string(dir.path().join("t2/table2.csv")).unwrap();
    assert_eq!(wide.lines().count(), 7);
}
