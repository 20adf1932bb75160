use std::io::Write;
use std::process::{Command, Output, Stdio};

use queerkit::expr::parse_element;
use queerkit::freealg::Element;
use queerkit::tensor_rep::SparseOperator;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_queerkit")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn nf_classical_example() {
    let o = run(&["nf", "--engine", "classical", "e1*f1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "f1*e1 + h1 - h2");
}

#[test]
fn nf_reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_queerkit"))
        .args(["nf", "--engine", "classical"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"e1*f1\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(stdout(&o).trim(), "f1*e1 + h1 - h2");
}

#[test]
fn dim_example() {
    let o = run(&["dim", "--n", "2", "--r", "2"]);
    assert_eq!(stdout(&o).trim(), "dim Q(2,2) = 32; dim Q0(2,2) = 8");
}

#[test]
fn basis_lists_32_elements() {
    let o = run(&["basis", "--n", "2", "--r", "2"]);
    assert_eq!(stdout(&o).lines().count(), 32);
    let o = run(&["basis", "--n", "2", "--r", "2", "--quantum", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let items = v.as_array().unwrap();
    assert_eq!(items.len(), 32);
    for it in items {
        assert!(it.get("A0").is_some() && it.get("A1").is_some() && it.get("lambda").is_some());
        parse_element(it["element"].as_str().unwrap()).unwrap();
    }
}

#[test]
fn corpus_subset_passes() {
    let o = run(&["corpus", "--only", "q-ppoo"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn covercheck_passes() {
    let o = run(&["covercheck"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Lemma q-ppee: 8 ids"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["dim", "--n", "0", "--r", "1"][..],
        &["dim", "--n", "2", "--r", "-1"],
        &["commutant", "--n", "1", "--r", "1", "--q0", "0"],
        &["commutant", "--n", "1", "--r", "1", "--q0", "x"],
        &["nf", "e1*("],
        &["nf", "--engine", "classical", "E1"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn computation_errors_exit_1() {
    let o = run(&["rep", "--gen", "E1", "--n", "1", "--r", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn fuel_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_queerkit")).args(["nf", "e1*f1*e1*f1*e1*f1"]).env("QUEERKIT_FUEL", "3").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["corpus", "--sample", "25", "--seed", "7", "--format", "json"]);
    let b = run(&["corpus", "--sample", "25", "--seed", "7", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 25);
    let c = run(&["corpus", "--sample", "25", "--seed", "8", "--format", "json"]);
    assert_ne!(stdout(&a), stdout(&c));
}

#[test]
fn json_round_trips() {
    let o = run(&["nf", "--format", "json", "E1*F1*Kb1"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let x = Element::from_json(&v).unwrap();
    let table = run(&["nf", "E1*F1*Kb1"]);
    assert_eq!(x, parse_element(stdout(&table).trim()).unwrap());
    assert_eq!(x.to_json(), v);
    // the JSON form is accepted back as input
    let again = run(&["nf", "--format", "json", &v.to_string()]);
    assert_eq!(stdout(&again), stdout(&o));

    let o = run(&["rep", "--gen", "Xb(1,2)", "--n", "2", "--r", "2", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let op = SparseOperator::from_json(&v).unwrap();
    assert_eq!(op.to_json(), v);
    assert_eq!(op.dim, 16);
}
