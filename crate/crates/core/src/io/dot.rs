//! Graphviz export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::automata::{LetterTransducer, WordAutomaton};
use crate::games::{GameSolution, ParityGame, Player};

fn esc(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Writes edges grouped by endpoints, one label line per transition.
fn grouped_edges(out: &mut String, edges: BTreeMap<(usize, usize), Vec<String>>) {
    for ((from, to), labels) in edges {
        let _ = writeln!(out, "  n{from} -> n{to} [label=\"{}\"];", esc(&labels.join("\n")).replace('\n', "\\n"));
    }
}

pub fn automaton_dot(d: &WordAutomaton) -> String {
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
    let _ = writeln!(out, "  label=\"{}\";", esc(&d.index().to_string()));
    for q in 0..d.num_states() {
        let _ = writeln!(out, "  n{q} [label=\"{}\"];", esc(d.state_name(q)));
    }
    for (i, &q) in d.initial().iter().enumerate() {
        let _ = writeln!(out, "  init{i} [shape=point];\n  init{i} -> n{q};");
    }
    let mut edges: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
    for (q, a, k, to) in d.transitions() {
        edges.entry((q, to)).or_default().push(format!("{}/{k}", d.alphabet().name(a)));
    }
    grouped_edges(&mut out, edges);
    out.push_str("}\n");
    out
}

pub fn transducer_dot(t: &LetterTransducer) -> String {
    let mut out = String::from("digraph transducer {\n  rankdir=LR;\n  node [shape=circle];\n");
    for (s, name) in t.state_names.iter().enumerate() {
        let _ = writeln!(out, "  n{s} [label=\"{}\"];", esc(name));
    }
    let _ = writeln!(out, "  init [shape=point];\n  init -> n{};", t.machine.initial());
    let mut edges: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
    for (s, i, &b, to) in t.machine.transitions() {
        let a = t.machine.inputs()[i];
        edges.entry((s, to)).or_default().push(format!("{}/{}", t.input.name(a), t.output.name(b)));
    }
    grouped_edges(&mut out, edges);
    out.push_str("}\n");
    out
}

/// Player I positions are boxes, Player II positions circles. With a
/// solution, winning regions are filled (I red, II blue) and strategy edges
/// drawn bold.
pub fn game_dot(g: &ParityGame, solution: Option<&GameSolution>) -> String {
    let mut out = String::from("digraph game {\n");
    for v in 0..g.num_positions() {
        let shape = match g.owner(v) {
            Player::I => "box",
            Player::II => "circle",
        };
        let fill = match solution.map(|s| s.winner[v]) {
            Some(Player::I) => ", style=filled, fillcolor=\"#f4b6b6\"",
            Some(Player::II) => ", style=filled, fillcolor=\"#b6cff4\"",
            None => "",
        };
        let _ = writeln!(out, "  n{v} [shape={shape}, label=\"{}\"{fill}];", esc(g.name(v)));
    }
    let _ = writeln!(out, "  init [shape=point];\n  init -> n{};", g.initial());
    for (e, edge) in g.edges().iter().enumerate() {
        let chosen = solution.is_some_and(|s| s.strategy[edge.from] == Some(e));
        let style = if chosen { ", style=bold, penwidth=2.5" } else { "" };
        let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"{style}];", edge.from, edge.to, edge.priority);
    }
    out.push_str("}\n");
    out
}
