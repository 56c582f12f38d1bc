use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use goedelkit::prover::check_certificate_json;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_goedelkit")).args(args).env("GOEDELKIT_COLOR", "0").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::write(&path, contents).unwrap();
    path
}

#[test]
fn prove_emits_a_checkable_certificate() {
    let o =
        run(&["prove", "--vset", "[0,1]", "--budget-level", "8", "--json", "all x all y ((P(x)->P(y))|(P(y)->P(x)))"]);
    assert_eq!(o.status.code(), Some(0));
    let report = json(&o);
    assert_eq!(report["verdict"], "valid");
    assert_eq!(report["exit_code"], 0);
    check_certificate_json(&report["certificate"].to_string()).unwrap();
}

#[test]
fn exit_codes_follow_verdicts() {
    assert_eq!(run(&["prove", "~~A -> A"]).status.code(), Some(1));
    assert_eq!(run(&["prove", "--budget-level", "4", "ex x (P(x) -> all y P(y))"]).status.code(), Some(2));
    assert_eq!(run(&["prove", "((("]).status.code(), Some(3));
    assert_eq!(run(&["prove", "--vset", "Vdown", "A -> A"]).status.code(), Some(3));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(3));
    assert_eq!(run(&["prove"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn eval_reads_an_interpretation() {
    let model = scratch("model.json", r#"{"domain": 1, "preds": {"A": {"()": "1/3"}, "B": {"()": "2/3"}}}"#);
    let m = model.to_str().unwrap();
    let o = run(&["eval", "--interp", m, "(A -> B) | (B -> A)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "verdict: 1\n");
    let o = run(&["eval", "--interp", m, "--json", "B -> A"]);
    assert_eq!(json(&o)["value"], "1/3");
}

#[test]
fn classify_countable_set() {
    let o = run(&["classify", "Vdown"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("verdict: countably-infinite; prenex fragment NOT axiomatizable\n"));
    let o = run(&["classify", "--json", "cantor"]);
    assert_eq!(json(&o)["class"], "uncountable");
    assert_eq!(json(&o)["axiomatizable"], true);
}

#[test]
fn witness_needs_an_uncountable_set() {
    let o = run(&["witness", "--json", "--depth", "3", "[0,1]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["points"].as_array().unwrap().len(), 7);
    assert_eq!(run(&["witness", "Vup"]).status.code(), Some(1));
}

#[test]
fn file_input_with_comments() {
    let file = scratch("list.txt", "# two formulas\nA -> A   # trivial\n\n(A -> B) | (B -> A)\n");
    let o = run(&["prove", "--json", "--file", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["certificates"].as_array().unwrap().len(), 2);
    let bad = scratch("bad.txt", "A -> A\nA ->\n");
    let o = run(&["prove", "--file", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.txt:2"));
}

#[test]
fn translate_reports_values() {
    let o = run(&["translate", "--json", "all x ~~E(x,x)"]);
    assert_eq!(o.status.code(), Some(1));
    let r = json(&o);
    assert_eq!(r["antecedent_value"], "1");
    assert_eq!(r["verdict"], "countermodel");
    assert_ne!(r["value"], "1");

    let o = run(&["translate", "--json", "--samples", "40", "all x (~~E(x,x) -> ~~E(x,x))"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["verdict"], "one-on-samples");
    assert_eq!(run(&["translate", "all x P(x)"]).status.code(), Some(3));
}

#[test]
fn herbrand_and_counter() {
    let o = run(&["herbrand", "--json", "--depth", "2", "all x ex y (P(x) -> P(y))"]);
    let r = json(&o);
    assert_eq!(r["herbrand_form"], "ex y (P(c0) -> P(y))");
    assert_eq!(r["atoms"].as_array().unwrap().len(), 2);
    let o = run(&["counter", "--json", "(A1 -> A2) | (A2 -> A3)"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["m"], 3);
    assert_eq!(run(&["counter", "(A -> B) | (B -> A)"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let args = ["--seed", "11", "translate", "--json", "--samples", "30", "ex x ~~E(x,x) -> ex x ~~E(x,x)"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let seq = run(&["--jobs", "1", "corpus", "--json"]);
    let par = run(&["--jobs", "4", "corpus", "--json"]);
    assert_eq!(seq.status.code(), Some(0));
    assert_eq!(seq.stdout, par.stdout);
}
