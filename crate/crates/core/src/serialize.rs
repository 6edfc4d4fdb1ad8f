//! JSON and Graphviz DOT renderings.
//!
//! Automaton JSON uses 1-based indices for both tables:
//! `{"degree":2,"states":["x"],"next":[[1,1]],"out":[[2,1]]}`. A `"letters"`
//! array is added only when the letters have non-default names.

use std::fmt::Write;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analysis::LabeledOrbitTree;
use crate::automaton::MealyAutomaton;
use crate::error::{Error, Result};
use crate::orbitaut::{DecompositionReport, OrbitAutomatonResult};
use crate::symmetry::PetalDiagram;

#[derive(Serialize, Deserialize)]
struct AutomatonJson {
    degree: usize,
    states: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    letters: Option<Vec<String>>,
    next: Vec<Vec<usize>>,
    out: Vec<Vec<usize>>,
}

fn one_based(rows: impl Iterator<Item = Vec<usize>>) -> Vec<Vec<usize>> {
    rows.map(|r| r.iter().map(|v| v + 1).collect()).collect()
}

pub fn to_json_value(a: &MealyAutomaton) -> Value {
    let n = a.num_states();
    let doc = AutomatonJson {
        degree: a.degree(),
        states: a.states().to_vec(),
        letters: (!a.has_default_letters()).then(|| a.letters().to_vec()),
        next: one_based((0..n).map(|q| a.next_row(q).to_vec())),
        out: one_based((0..n).map(|q| a.out_row(q).to_vec())),
    };
    serde_json::to_value(doc).expect("plain data serializes")
}

/// Compact JSON text of an automaton.
pub fn to_json(a: &MealyAutomaton) -> String {
    to_json_value(a).to_string()
}

pub fn from_json_value(value: Value) -> Result<MealyAutomaton> {
    let doc: AutomatonJson = serde_json::from_value(value).map_err(|e| Error::Json(e.to_string()))?;
    let zero_based = |rows: Vec<Vec<usize>>, what: &str| -> Result<Vec<Vec<usize>>> {
        rows.into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|v| {
                        v.checked_sub(1)
                            .ok_or_else(|| Error::Json(format!("{what} entries are 1-based")))
                    })
                    .collect()
            })
            .collect()
    };
    let next = zero_based(doc.next, "next")?;
    let out = zero_based(doc.out, "out")?;
    match doc.letters {
        Some(letters) => {
            if letters.len() != doc.degree {
                return Err(Error::Json(format!(
                    "{} letter names for degree {}",
                    letters.len(),
                    doc.degree
                )));
            }
            MealyAutomaton::new(doc.states, letters, next, out)
        }
        None => MealyAutomaton::with_degree(doc.states, doc.degree, next, out),
    }
}

pub fn from_json(text: &str) -> Result<MealyAutomaton> {
    from_json_value(serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn word_or_root(s: String) -> String {
    if s.is_empty() {
        "ε".to_string()
    } else {
        s
    }
}

/// Moore diagram: one node per state, one edge per (state, letter) labeled
/// `x|y` with letter names.
pub fn automaton_dot(a: &MealyAutomaton) -> String {
    let mut s = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
    for q in 0..a.num_states() {
        let _ = writeln!(s, "  {};", quote(a.state_name(q)));
    }
    for q in 0..a.num_states() {
        for x in 0..a.degree() {
            let _ = writeln!(
                s,
                "  {} -> {} [label={}];",
                quote(a.state_name(q)),
                quote(a.state_name(a.next(q, x))),
                quote(&format!("{}|{}", a.letter_name(x), a.letter_name(a.out(q, x))))
            );
        }
    }
    s.push_str("}\n");
    s
}

fn orbit_node_id(level: usize, i: usize) -> String {
    format!("L{level}_{i}")
}

/// Orbit tree: nodes show representative and size, edges carry the label.
pub fn orbit_tree_dot(tree: &LabeledOrbitTree) -> String {
    let mut s = String::from("digraph orbit_tree {\n  node [shape=box];\n");
    for (n, level) in tree.levels.iter().enumerate() {
        for (i, node) in level.iter().enumerate() {
            let label = format!(
                "{} ({})",
                word_or_root(tree.format_word(&node.representative)),
                node.size
            );
            let _ = writeln!(s, "  {} [label={}];", orbit_node_id(n, i), quote(&label));
        }
    }
    for (n, level) in tree.levels.iter().enumerate().skip(1) {
        for (i, node) in level.iter().enumerate() {
            let parent = node.parent.expect("non-root orbits have parents");
            let _ = writeln!(
                s,
                "  {} -> {} [label=\"{}\"];",
                orbit_node_id(n - 1, parent),
                orbit_node_id(n, i),
                node.label
            );
        }
    }
    s.push_str("}\n");
    s
}

pub fn orbit_tree_json(tree: &LabeledOrbitTree) -> Value {
    let levels: Vec<Value> = tree
        .levels
        .iter()
        .map(|level| {
            Value::Array(
                level
                    .iter()
                    .map(|node| {
                        json!({
                            "representative": tree.format_word(&node.representative),
                            "size": node.size,
                            "parent": node.parent,
                            "label": node.label,
                        })
                    })
                    .collect(),
            )
        })
        .collect();
    json!({ "degree": tree.degree, "levels": levels })
}

/// Orbit automaton with its legend: which raw states each minimized state merges.
pub fn orbit_automaton_json(result: &OrbitAutomatonResult) -> Value {
    let legend: serde_json::Map<String, Value> = result
        .legend()
        .into_iter()
        .map(|(name, members)| (name, json!(members)))
        .collect();
    json!({
        "raw": to_json_value(&result.raw),
        "minimized": to_json_value(&result.minimized),
        "legend": legend,
    })
}

const CLASS_COLORS: [&str; 6] = ["white", "gray30", "lightblue", "orange", "palegreen", "pink"];

/// Petal graph: nodes numbered by position, filled by symmetry class.
pub fn petal_dot(diagram: &PetalDiagram) -> String {
    let mut s = String::from("digraph petals {\n  node [shape=circle, style=filled];\n");
    for (i, &tag) in diagram.tags.iter().enumerate() {
        let color = CLASS_COLORS[tag % CLASS_COLORS.len()];
        let font = if color == "gray30" { ", fontcolor=white" } else { "" };
        let _ = writeln!(s, "  n{i} [label=\"{i}\", fillcolor={color}{font}];");
    }
    for (i, &j) in diagram.edges.iter().enumerate() {
        let _ = writeln!(s, "  n{i} -> n{j};");
    }
    s.push_str("}\n");
    s
}

pub fn petal_json(diagram: &PetalDiagram) -> Value {
    json!({
        "nodes": diagram.nodes.iter().map(to_json_value).collect::<Vec<_>>(),
        "edges": diagram.edges,
        "classes": diagram.tags,
    })
}

pub fn decomposition_json(report: &DecompositionReport) -> Value {
    let nodes: Vec<Value> = report
        .nodes
        .iter()
        .map(|n| {
            let base = &n.automaton;
            json!({
                "automaton": to_json_value(base),
                "canonical": n.canonical.to_string(),
                "verdict": n.verdict,
                "transitivity": n.transitivity,
                "group_size": n.group.as_ref().and_then(|g| g.count()),
                "orbits": n.edges.iter().map(|e| json!({
                    "representative": base.format_letter_word(&e.orbit_rep),
                    "size": e.orbit_size,
                    "k": e.k,
                    "target": e.target,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "nodes": nodes })
}

pub fn decomposition_dot(report: &DecompositionReport) -> String {
    let mut s = String::from("digraph decomposition {\n  node [shape=box];\n");
    for (i, n) in report.nodes.iter().enumerate() {
        let label = format!(
            "#{i}: {} states, {} letters\\n{:?}",
            n.automaton.num_states(),
            n.automaton.degree(),
            n.verdict
        );
        let _ = writeln!(s, "  d{i} [label=\"{label}\"];");
    }
    for (i, n) in report.nodes.iter().enumerate() {
        for e in &n.edges {
            let rep = n.automaton.format_letter_word(&e.orbit_rep);
            let _ = writeln!(
                s,
                "  d{i} -> d{} [label={}];",
                e.target,
                quote(&format!("{rep} (k={})", e.k))
            );
        }
    }
    s.push_str("}\n");
    s
}
