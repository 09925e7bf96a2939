//! Graphviz export.

use std::fmt::Write;

use super::{Label, Nfa, State, TransitionGraph};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn edge_label(l: Label) -> String {
    match l {
        None => "ε".to_string(),
        Some(c) if (c as u32) >= crate::alphabet::PRIVATE_BASE && (c as u32) < 0xF900 => {
            format!("#{:X}", c as u32)
        }
        Some(c) => c.to_string(),
    }
}

/// Renders `g` with optional initial state and finals.
pub fn graph_to_dot(name: &str, g: &TransitionGraph, initial: Option<State>, finals: &[State]) -> String {
    let mut s = String::new();
    writeln!(s, "digraph \"{}\" {{", escape(name)).unwrap();
    writeln!(s, "  rankdir=LR;").unwrap();
    if let Some(i) = initial {
        writeln!(s, "  __start [shape=point];").unwrap();
        writeln!(s, "  __start -> {};", i).unwrap();
    }
    for q in 0..g.num_states() {
        let shape = if finals.contains(&q) { "doublecircle" } else { "circle" };
        writeln!(s, "  {} [shape={}, label=\"{}\"];", q, shape, escape(&g.label(q))).unwrap();
    }
    for (p, l, q) in g.edges() {
        writeln!(s, "  {} -> {} [label=\"{}\"];", p, q, escape(&edge_label(l))).unwrap();
    }
    s.push_str("}\n");
    s
}

pub fn nfa_to_dot(name: &str, a: &Nfa) -> String {
    let finals: Vec<State> = a.finals.iter().copied().collect();
    graph_to_dot(name, &a.graph, Some(a.initial), &finals)
}
