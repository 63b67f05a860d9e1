use std::path::Path;
use std::process::{Command, Output};

use mpsqaoa_cli::formats::parse_interactions;
use mpsqaoa_core::hamiltonian::maxcut_to_interactions;
use mpsqaoa_core::{qaoa_expectation, AngleSchedule, GraphSpec, QaoaProblem, TruncationConfig};
use serde_json::Value;

fn mpsqaoa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpsqaoa")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

const EDGE: &str = r#"{"n": 2, "constant": 0, "terms": [{"sites": [1, 2], "coeff": 1}]}"#;

#[test]
fn convert_path_graph() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "path.txt", "n 3\n1 2 1\n2 3 2\n");
    let out = mpsqaoa(&["convert", "--input", &input, "--problem", "maxcut"]);
    let v = json(&out);
    assert_eq!(v["terms"].as_array().unwrap().len(), 2);
    assert_eq!(v["terms"][1]["coeff"], 2.0);

    let output = dir.path().join("mis.json");
    let input = write(dir.path(), "edge.txt", "n 3\n1 2\n");
    let out = mpsqaoa(&["convert", "--input", &input, "--problem", "mis", "--lambda", "2", "--output", output.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("constant: 1"));
    let ham = parse_interactions(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(ham.constant(), 1.0);
}

#[test]
fn convert_rejects_malformed_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.txt", "n 3\n1 2 x\n");
    let out = mpsqaoa(&["convert", "--input", &input, "--problem", "maxcut"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn convert_maxsat() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "f.cnf", "p cnf 2 2\n1 2 0\n-1 0\n");
    let v = json(&mpsqaoa(&["convert", "--input", &input, "--problem", "maxsat"]));
    // 2 - (1/4)(1+z1)(1+z2) - (1/2)(1-z1)
    assert_eq!(v["constant"], 1.25);
    assert_eq!(v["n"], 2);
}

#[test]
fn solve_single_edge() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write(dir.path(), "edge.json", EDGE);
    let v = json(&mpsqaoa(&["solve", "--problem", &problem, "--angles", "0.3927,0.7854", "--post-process", "maxcut"]));
    assert!((v["energy"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!(v["post_processed"].as_f64().unwrap().abs() < 1e-6);
    assert_eq!(v["metrics"]["max_bond"], 2);

    let out = mpsqaoa(&["solve", "--problem", &problem, "--angles", "0.1,0.2,0.3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = mpsqaoa(&["solve", "--problem", &problem, "--angles", "-0.3927,-0.7854"]);
    assert!((json(&out)["energy"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn solve_dumps_state() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write(dir.path(), "edge.json", EDGE);
    let dump = dir.path().join("state.json");
    json(&mpsqaoa(&["solve", "--problem", &problem, "--angles", "0.2,0.5", "--dump-state", dump.to_str().unwrap()]));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dump).unwrap()).unwrap();
    assert_eq!(v["n_sites"], 2);
    assert_eq!(v["sites"][0]["shape"], serde_json::json!([1, 2, 2]));
    let norm: f64 = v["sites"][0]["data"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap().powi(2)).sum();
    assert!(norm > 0.0);
}

#[test]
fn round_trip_through_convert_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "g.txt", "n 5\n1 2 0.5\n2 3\n3 4 1.5\n4 5\n1 5 2\n2 4\n");
    let out_path = dir.path().join("g.json");
    assert!(mpsqaoa(&["convert", "--input", &input, "--problem", "maxcut", "--output", out_path.to_str().unwrap()])
        .status
        .success());
    let v = json(&mpsqaoa(&[
        "solve", "--problem", out_path.to_str().unwrap(), "--angles", "0.3,0.1,0.7,0.4", "--cutoff", "0", "--maxdim", "8",
    ]));
    let g = GraphSpec::new(5, [(1, 2, 0.5), (2, 3, 1.0), (3, 4, 1.5), (4, 5, 1.0), (1, 5, 2.0), (2, 4, 1.0)]).unwrap();
    let problem = QaoaProblem::new(maxcut_to_interactions(&g, true).unwrap());
    let angles = AngleSchedule::new(vec![0.3, 0.1], vec![0.7, 0.4]).unwrap();
    let (e, _) = qaoa_expectation(&angles, &problem, &TruncationConfig::new(0.0, 8).unwrap()).unwrap();
    assert_eq!(v["energy"].as_f64().unwrap(), e);
}

#[test]
fn optimize_single_edge() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write(dir.path(), "edge.json", EDGE);
    let args = ["optimize", "--problem", &problem, "--p", "1", "--min", "--restarts", "5", "--seed", "1", "--trace"];
    let first = mpsqaoa(&args);
    let v = json(&first);
    assert!((v["energy"].as_f64().unwrap() + 1.0).abs() < 1e-5);
    assert_eq!(v["angles"].as_array().unwrap().len(), 2);
    assert!(!v["trace"].as_array().unwrap().is_empty());
    assert_eq!(mpsqaoa(&args).stdout, first.stdout);

    let out = mpsqaoa(&["optimize", "--problem", &problem, "--p", "2", "--warm-start", "0.1,0.2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_graph() {
    let k4 = mpsqaoa(&["gen-graph", "--n", "4", "--degree", "3"]);
    assert!(k4.status.success());
    assert_eq!(String::from_utf8(k4.stdout).unwrap(), "n 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n");
    assert_eq!(mpsqaoa(&["gen-graph", "--n", "5", "--degree", "3"]).status.code(), Some(2));

    let a = mpsqaoa(&["gen-graph", "--n", "32", "--seed", "7", "--weighted"]);
    let b = mpsqaoa(&["gen-graph", "--n", "32", "--seed", "7", "--weighted"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let g = mpsqaoa_cli::formats::parse_edge_list(&String::from_utf8(a.stdout).unwrap()).unwrap();
    assert_eq!(g.n_edges(), 48);
    assert!(g.edges().iter().all(|&(_, _, w)| w > 0.0 && w <= 1.0));
}

#[test]
fn benchmark_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    let out = mpsqaoa(&[
        "benchmark", "--sizes", "10", "--depths", "1,2,3", "--chis", "4,8", "--seed", "2", "--jobs", "2", "--output",
        csv.to_str().unwrap(),
    ]);
    let summary = json(&out);
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], mpsqaoa_cli::bench::CSV_HEADER);
    assert_eq!(lines.len(), 7);
    assert!(lines[1..].iter().all(|l| l.ends_with(",ok")));
    assert_eq!(summary["ok"], 6);
    assert_eq!(summary["depth_fits"].as_array().unwrap().len(), 2);
    assert!(summary["depth_fits"][0]["fit"]["r_squared"].is_number());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(mpsqaoa(&[]).status.code(), Some(2));
    assert_eq!(mpsqaoa(&["solve"]).status.code(), Some(2));
    assert_eq!(mpsqaoa(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(mpsqaoa(&["--help"]).status.code(), Some(0));
    let out = mpsqaoa(&["solve", "--problem", "/nonexistent/p.json", "--angles", "0.1,0.2"]);
    assert_eq!(out.status.code(), Some(1));
}
