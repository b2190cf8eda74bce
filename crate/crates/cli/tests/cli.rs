use std::process::{Command, Output};

fn bifset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bifset")).args(args).output().expect("binary runs")
}

#[test]
fn worked_example_succeeds_with_json_on_stdout() {
    let out = bifset(&["analyze", "--f", "(x^2+y)/(x+y)", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["verdict"], "verified");
    assert!(!out.stderr.is_empty(), "text summary goes to stderr when JSON takes stdout");
}

#[test]
fn numerator_and_denominator_flags() {
    let a = bifset(&["analyze", "--num", "x^2+y", "--den", "x+y", "--json", "-"]);
    let b = bifset(&["analyze", "--f", "(x^2+y)/(x+y)", "--json", "-"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn refuted_hypothesis_exits_3() {
    let out = bifset(&["analyze", "--f", "1 + x^2 - 2*x*y + y^2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(bifset(&["analyze", "--f", "x^^2"]).status.code(), Some(2));
    assert_eq!(bifset(&["analyze", "--f", "(x*y)/(x*y^2)"]).status.code(), Some(2));
    assert_eq!(bifset(&["analyze", "--f", "x + w"]).status.code(), Some(2));
}

#[test]
fn svg_needs_two_variables() {
    let out = bifset(&["analyze", "--f", "1 + x + y + z", "--vars", "x,y,z", "--svg", "-"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("two variables"));
}
