//! Graphviz DOT rendering of circuit graphs.

use std::fmt::Write;

use crate::model::{CircuitGraph, NodeId};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Quotes a multi-part label, joining the parts with DOT line breaks.
fn label(parts: &[String]) -> String {
    let escaped: Vec<String> = parts
        .iter()
        .map(|p| p.replace('\\', "\\\\").replace('"', "\\\""))
        .collect();
    format!("\"{}\"", escaped.join("\\n"))
}

/// Renders an undirected DOT graph: one node per component, junction, and
/// crossover; one edge per connection with port endpoints collapsed onto
/// their owners. Annotated components carry their function names in the
/// label. Output is deterministic.
pub fn render_dot(graph: &CircuitGraph) -> String {
    let mut out = String::from("graph circuit {\n");
    out.push_str("  node [fontname=\"Helvetica\"];\n");

    for view in graph.components() {
        let mut parts = vec![view.name.to_string(), view.class.name().to_string()];
        let functions: Vec<&str> = graph
            .annotations()
            .iter()
            .filter(|a| &a.component == view.id)
            .map(|a| a.class.name())
            .collect();
        if !functions.is_empty() {
            parts.push(format!("[{}]", functions.join(", ")));
        }
        let shape = if functions.is_empty() {
            "box"
        } else {
            "hexagon"
        };
        let _ = writeln!(
            out,
            "  {} [label={}, shape={shape}];",
            quote(view.id.as_str()),
            label(&parts)
        );
    }
    for id in graph.junctions() {
        let _ = writeln!(out, "  {} [shape=point];", quote(id.as_str()));
    }
    for id in graph.crossovers() {
        let _ = writeln!(out, "  {} [shape=diamond, label=\"X\"];", quote(id.as_str()));
    }

    let owner_of = |id: &NodeId| -> NodeId {
        match graph.port(id) {
            Some(port) => port.owner.clone(),
            None => id.clone(),
        }
    };
    let mut edges: Vec<(NodeId, NodeId)> = graph
        .connections()
        .map(|(a, b)| {
            let (a, b) = (owner_of(a), owner_of(b));
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    edges.sort();
    for (a, b) in edges {
        let _ = writeln!(out, "  {} -- {};", quote(a.as_str()), quote(b.as_str()));
    }
    out.push_str("}\n");
    out
}
