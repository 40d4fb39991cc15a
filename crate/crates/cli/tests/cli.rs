use std::path::Path;
use std::process::{Command, Output};

use compind::generators::{enumerate_trees, tree_tk};
use compind::{solve, CanonMode, GameState, Mover};
use serde_json::Value;

fn compind(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_compind"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_then_solve_matches_in_memory() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t2.txt");
    assert!(compind(&["gen", "tk", "--k", "2", "--out", p(&file)]).status.success());
    let out = compind(&["solve", "--input", p(&file), "--start", "sweller"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let value = v["value"].as_u64().unwrap();
    assert!(value <= 8);
    let (f, _) = tree_tk(2);
    let direct = solve(&GameState::new(&f).unwrap(), Mover::Sweller, CanonMode::Iso).unwrap();
    assert_eq!(value, direct.value as u64);
    let moves: Vec<u64> = v["optimal_moves"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert_eq!(moves, direct.optimal_moves.iter().map(|&m| m as u64).collect::<Vec<_>>());
    assert!(v["stats"]["visited"].as_u64().unwrap() > 0);
}

#[test]
fn raw_and_iso_solves_agree() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("r.txt");
    compind(&["gen", "forest", "--n", "12", "--c", "3", "--seed", "5", "--out", p(&file)]);
    let a = json(&compind(&["solve", "--input", p(&file), "--start", "diminisher", "--canon", "raw"]));
    let b = json(&compind(&["solve", "--input", p(&file), "--start", "diminisher", "--canon", "iso"]));
    assert_eq!(a["value"], b["value"]);
    assert_eq!(a["optimal_moves"], b["optimal_moves"]);
}

#[test]
fn lower_bound_counts_every_tree() {
    let out = compind(&["verify", "lower-bound", "--max-n", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let expected: usize = (1..=12).map(|n| enumerate_trees(n).unwrap().len()).sum();
    assert_eq!(json(&out)["checked"].as_u64().unwrap() as usize, expected);
}

fn flatten(prefix: String, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: String| if prefix.is_empty() { k } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(key(k.clone()), x, out)),
        Value::Array(a) if !a.is_empty() => {
            a.iter().enumerate().for_each(|(i, x)| flatten(key(i.to_string()), x, out))
        }
        Value::String(s) => out.push((prefix, s.clone())),
        x => out.push((prefix, x.to_string())),
    }
}

#[test]
fn csv_and_json_carry_the_same_figures() {
    for check in [["tk", "--k-max", "3"], ["ratio", "--max-n", "7"], ["lemmas", "--max-n", "5"]] {
        let mut args = vec!["verify"];
        args.extend(check);
        let j = json(&compind(&args));
        args.extend(["--format", "csv"]);
        let c = compind(&args);
        assert_eq!(c.status.code(), Some(0));
        let mut reader = csv::Reader::from_reader(c.stdout.as_slice());
        let rows: Vec<(String, String)> = reader
            .records()
            .map(|r| {
                let r = r.unwrap();
                (r[0].to_string(), r[1].to_string())
            })
            .collect();
        let mut expected = Vec::new();
        flatten(String::new(), &j, &mut expected);
        assert_eq!(rows, expected);
    }
}

#[test]
fn output_does_not_depend_on_jobs() {
    let one = compind(&["verify", "lower-bound", "--max-n", "8", "--forests", "--jobs", "1"]);
    let four = compind(&["verify", "lower-bound", "--max-n", "8", "--forests", "--jobs", "4"]);
    assert_eq!(one.stdout, four.stdout);
    let one = compind(&["verify", "tk", "--k-max", "6", "--jobs", "1"]);
    let three = compind(&["verify", "tk", "--k-max", "6", "--jobs", "3"]);
    assert_eq!(one.stdout, three.stdout);
}

#[test]
fn play_is_reproducible_and_exports_fixed_fields() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("f.txt");
    compind(&["gen", "random", "--n", "30", "--seed", "11", "--out", p(&file)]);
    let args = ["play", "--input", p(&file), "--sweller", "random:4", "--diminisher", "random:9"];
    let a = compind(&args);
    let b = compind(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let t = json(&a);
    for field in ["n", "C", "first_mover", "moves", "N"] {
        assert!(t.get(field).is_some(), "missing {field}");
    }
    assert_eq!(t["N"].as_u64().unwrap() as usize, t["moves"].as_array().unwrap().len());
}

#[test]
fn tk_strategy_is_available_on_tk_input() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t3.txt");
    compind(&["gen", "tk", "--k", "3", "--out", p(&file)]);
    let out = compind(&["play", "--input", p(&file), "--sweller", "optimal", "--diminisher", "tk"]);
    assert!(out.status.success());
    assert!(json(&out)["N"].as_u64().unwrap() <= 10);
}

#[test]
fn failing_checks_exit_one_and_still_report() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.txt");
    let report = dir.path().join("report.json");
    compind(&["gen", "path", "--n", "7", "--out", p(&file)]);
    // With beta = 0 the round bound is 0, which any first move exceeds.
    let out = compind(&[
        "verify", "rounds", "--input", p(&file), "--beta-eighths", "0", "--out", p(&report),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(!r["failures"].as_array().unwrap().is_empty());
}

#[test]
fn usage_and_io_errors_exit_two() {
    assert_eq!(compind(&["solve", "--start", "sweller"]).status.code(), Some(2));
    assert_eq!(compind(&["verify", "ratio", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        compind(&["solve", "--input", "/nonexistent/graph.txt", "--start", "sweller"]).status.code(),
        Some(2)
    );
    assert_eq!(compind(&["gen", "enum", "--n", "20"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cycle.txt");
    std::fs::write(&file, "3 3\n0 1\n1 2\n2 0\n").unwrap();
    let out = compind(&["solve", "--input", p(&file), "--start", "sweller"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cycle"));
}

#[test]
fn enumerated_stream_parses_back() {
    let out = compind(&["gen", "enum", "--n", "8", "--forests"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let forests = compind::forest::parse_graphs(&text).unwrap();
    assert_eq!(forests.len(), 76);
}
