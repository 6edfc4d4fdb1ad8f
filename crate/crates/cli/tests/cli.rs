//! End-to-end tests of the `mealy-orbits` binary: outputs, formats and exit codes.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

const FINITE: &str = "x=(y,y); y=(x,x)(1,2)";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mealy-orbits"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mealy-orbits"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("UTF-8 output")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("JSON output")
}

/// JSON of the dual of a named automaton, which keeps its letter names.
fn dual_json(name: &str) -> String {
    stdout(&run(&["dual", "--named", name, "--format", "json"]))
}

#[test]
fn show_json_of_single_state() {
    let out = run(&["show", "--rec", "x=(x,x)(1,2)", "--format", "json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        json_of(&out),
        json!({"degree": 2, "states": ["x"], "next": [[1, 1]], "out": [[2, 1]]})
    );
}

#[test]
fn json_round_trips_through_stdin() {
    let emitted = stdout(&run(&["show", "--named", "c", "--format", "json"]));
    let out = run_stdin(&["show", "--in", "-"], &emitted);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), stdout(&run(&["show", "--named", "c"])));
}

#[test]
fn dual_of_bellaterra_names_states_by_letters() {
    let out = run(&["dual", "--named", "b3", "--format", "json"]);
    assert_eq!(json_of(&out)["states"], json!(["0", "1"]));
}

#[test]
fn dot_of_bellaterra() {
    let out = stdout(&run(&["show", "--named", "b3", "--format", "dot"]));
    assert_eq!(out.lines().filter(|l| l.contains("->")).count(), 6);
    assert!(out.contains("\"a\" -> \"c\" [label=\"0|0\"];"));
    assert_eq!(out, stdout(&run(&["show", "--named", "b3", "--format", "dot"])));
}

#[test]
fn props_and_minimize() {
    let out = stdout(&run(&["props", "--rec", FINITE]));
    assert!(out.contains("invertible: true"));
    assert!(out.contains("bireversible: true"));
    let out = stdout(&run(&["minimize", "--rec", "x=(y,y); y=(x,x)"]));
    assert_eq!(out.trim(), "x=(x,x)");
}

#[test]
fn inverse_requires_invertibility() {
    let out = run(&["inverse", "--rec", "x=(x,x)[1,1]"]);
    assert_eq!(code(&out), 2);
    let out = run(&["inverse", "--rec", "x=(y,x)(1,2); y=(y,y)"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn word_problem_exit_codes() {
    let trivial = run(&["is-trivial", "--named", "b3", "--element", "a*a"]);
    assert_eq!((code(&trivial), stdout(&trivial).trim()), (0, "true"));
    let nontrivial = run(&["is-trivial", "--named", "b", "--element", "e*r"]);
    assert_eq!((code(&nontrivial), stdout(&nontrivial).trim()), (1, "false"));
    let equal = run(&["equal", "--rec", FINITE, "--element", "x*y", "--other", "y*x"]);
    assert_eq!(code(&equal), 0);
}

#[test]
fn order_and_enumeration() {
    let out = run(&["order", "--rec", FINITE, "--element", "x*y"]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "2"));
    let out = run(&["order", "--named", "b", "--element", "e*r", "--cap", "50"]);
    assert_eq!(code(&out), 3);
    let out = run(&["enumerate", "--rec", FINITE, "--format", "json"]);
    assert_eq!(json_of(&out)["count"], json!(4));
    let out = run(&["enumerate", "--named", "b3", "--cap", "100"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn act_section_and_run() {
    assert_eq!(
        stdout(&run(&["act", "--named", "b", "--element", "q*w", "--vertex", "0101"])).trim(),
        "1110"
    );
    assert_eq!(
        stdout(&run(&["section", "--named", "b", "--element", "q*w", "--vertex", "01"])).trim(),
        "q*r"
    );
    let out = stdout(&run(&["run", "--named", "b", "--state", "q", "--vertex", "0101"]));
    assert_eq!(out, "output: 0000\nstate: q\n");
}

#[test]
fn orbit_tree_of_dual_b() {
    let out = run_stdin(
        &["orbit-tree", "--in", "-", "--depth", "2", "--format", "json"],
        &dual_json("b"),
    );
    let tree = json_of(&out);
    let labels = |n: usize| -> Vec<u64> {
        tree["levels"][n]
            .as_array()
            .unwrap()
            .iter()
            .map(|o| o["label"].as_u64().unwrap())
            .collect()
    };
    assert_eq!(labels(1), vec![4]);
    assert_eq!(labels(2), vec![2, 2]);
    let dot = stdout(&run_stdin(
        &["orbit-tree", "--in", "-", "--depth", "2", "--format", "dot"],
        &dual_json("b"),
    ));
    assert_eq!(dot.matches("[label=\"2\"]").count(), 2);
}

#[test]
fn orbits_and_transitivity_level() {
    let out = stdout(&run_stdin(&["orbits", "--in", "-", "--depth", "2"], &dual_json("b")));
    assert_eq!(out, "qq 8\nqw 8\n");
    let out = run_stdin(&["tlevel", "--in", "-"], &dual_json("b"));
    assert_eq!((code(&out), stdout(&out).trim()), (0, "1"));
    let out = run(&["tlevel", "--named", "b3", "--cap", "5"]);
    assert_eq!((code(&out), stdout(&out).trim()), (3, "at least 5"));
}

#[test]
fn spherical_transitivity() {
    let yes = run(&["sph-transitive", "--named", "b3", "--element", "a*c"]);
    assert_eq!(code(&yes), 0);
    let no = run(&["sph-transitive", "--named", "b3", "--element", "a"]);
    assert_eq!(code(&no), 1);
    let ternary = run(&["sph-transitive", "--rec", "x=(x,x,x)(1,2,3)", "--element", "x"]);
    assert_eq!(code(&ternary), 2);
}

#[test]
fn orbit_automata_of_duals() {
    let out = run_stdin(&["orbit-automaton", "--in", "-", "--orbit-rep", "qw"], &dual_json("b"));
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("k: 2\n"));
    assert!(
        text.contains("minimized:\n0_q=(1_w,1_w)(1,2)\n1_q=(0_w,0_w)\n0_w=(0_q,1_q)\n1_w=(1_q,0_q)\n"),
        "{text}"
    );
    let json_out = run_stdin(
        &["orbit-automaton", "--in", "-", "--orbit-rep", "ac", "--format", "json"],
        &dual_json("c"),
    );
    let minimized = json_of(&json_out)["minimized"].to_string();
    let canon_min = stdout(&run_stdin(&["canon", "--in", "-"], &minimized));
    let canon_b = stdout(&run(&["canon", "--named", "b"]));
    assert_eq!(canon_min.lines().next(), canon_b.lines().next());
}

#[test]
fn tau_of_a_stabilizing_word() {
    let out = run_stdin(
        &[
            "tau",
            "--in",
            "-",
            "--orbit-rep",
            "qw",
            "--vertex",
            "q",
            "--element",
            "0*1*0*1^-1",
        ],
        &dual_json("b"),
    );
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 2);
    let moved = run_stdin(
        &[
            "tau",
            "--in",
            "-",
            "--orbit-rep",
            "qw",
            "--vertex",
            "q",
            "--element",
            "0",
        ],
        &dual_json("b"),
    );
    assert_eq!(code(&moved), 2);
}

#[test]
fn certification() {
    let out = run(&["certify", "--named", "b", "--orbit-rep", "qw", "--depth", "8"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("certified to depth 8\n"));
    let out = run(&[
        "certify",
        "--named",
        "c",
        "--orbit-rep",
        "ac",
        "--depth",
        "8",
        "--format",
        "json",
    ]);
    assert_eq!(json_of(&out)["levels"].as_array().unwrap().len(), 8);
    let out = run(&["certify", "--rec", FINITE, "--orbit-rep", "xx", "--depth", "6"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("not certified"));
}

#[test]
fn md_reduction_certifies_b() {
    let out = stdout(&run(&["md-reduce", "--named", "b", "--format", "json"]));
    let trace: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(trace["md_trivial"], json!(false));
    assert_eq!(trace["certifies_infinite"], json!(true));
}

#[test]
fn decomposition() {
    let out = run(&["decompose", "--rec", "x=(x,x)", "--format", "json"]);
    let nodes = json_of(&out)["nodes"].as_array().unwrap().clone();
    assert_eq!(nodes.len(), 1);
    assert_eq!(nodes[0]["verdict"], json!("FiniteCertificate"));
    let out = stdout(&run_stdin(
        &["decompose", "--in", "-", "--cap", "100"],
        &dual_json("b3"),
    ));
    assert!(out.starts_with("#0: 2 states, 3 letters, Expanded"), "{out}");
    let dot = stdout(&run(&["decompose", "--named", "b", "--format", "dot"]));
    assert!(dot.starts_with("digraph decomposition {"));
}

#[test]
fn symmetry_class_and_petals() {
    let out = stdout(&run(&["sym-class", "--named", "b"]));
    assert!(out.starts_with("48 automata\n"));
    let out = run(&["petals", "--named", "c", "--format", "json"]);
    let diagram = json_of(&out);
    let edges = diagram["edges"].as_array().unwrap();
    assert!(edges.len() >= 48);
    let classes: std::collections::BTreeSet<u64> = diagram["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_u64().unwrap())
        .collect();
    assert_eq!(classes.len(), 2);
    let fixed = edges
        .iter()
        .enumerate()
        .filter(|(i, e)| e.as_u64() == Some(*i as u64))
        .count();
    assert_eq!(fixed, 1);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&run(&["show"])), 2);
    assert_eq!(code(&run(&["show", "--rec", "x=(y"])), 2);
    assert_eq!(code(&run(&["show", "--named", "b", "--rec", FINITE])), 2);
    assert_eq!(code(&run(&["no-such-command"])), 2);
    assert_eq!(code(&run(&["props", "--named", "b", "--format", "dot"])), 2);
    assert_eq!(code(&run(&["is-trivial", "--named", "b"])), 2);
    assert_eq!(code(&run(&["is-trivial", "--named", "b", "--element", "z"])), 2);
    assert_eq!(code(&run(&["show", "--in", "/nonexistent/file"])), 2);
}
