//! JSON graph exchange format for recognition-pipeline output.
//!
//! ```json
//! {
//!   "nodes": [
//!     {"id": "D1", "class": "DIODE", "name": "D1",
//!      "ports": [{"id": "D1_a", "name": "anode"}], "position": [0, 0]},
//!     {"id": "j1", "class": "JUNCTION"}
//!   ],
//!   "edges": [{"from": "D1_a", "to": "j1"}]
//! }
//! ```
//!
//! `class` is a component class name or `JUNCTION` / `CROSSOVER`; edge
//! endpoints are node or port ids.

use serde::{Deserialize, Serialize};

use crate::model::{CircuitGraph, Vocabulary};

use super::IngestError;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct JsonGraph {
    nodes: Vec<JsonNode>,
    edges: Vec<JsonEdge>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct JsonNode {
    id: String,
    class: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ports: Option<Vec<JsonPort>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    position: Option<[i64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct JsonPort {
    id: String,
    name: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct JsonEdge {
    from: String,
    to: String,
}

/// Loads a circuit graph from the JSON exchange format. Class names resolve
/// through the vocabulary; dangling edge endpoints are reported with their
/// edge index.
pub fn load_json_graph(text: &str, vocab: &Vocabulary) -> Result<CircuitGraph, IngestError> {
    let parsed: JsonGraph =
        serde_json::from_str(text).map_err(|e| IngestError::JsonSyntax(e.to_string()))?;
    let mut builder = CircuitGraph::builder();
    for (i, node) in parsed.nodes.iter().enumerate() {
        let at = |field: &str| format!("nodes[{i}].{field}");
        match node.class.as_str() {
            "JUNCTION" => {
                builder.add_junction(&node.id).map_err(|e| IngestError::Json(format!("{}: {e}", at("id"))))?;
                if node.ports.as_ref().is_some_and(|p| !p.is_empty()) {
                    return Err(IngestError::Json(format!(
                        "{}: junctions cannot own ports",
                        at("ports")
                    )));
                }
            }
            "CROSSOVER" => {
                builder.add_crossover(&node.id).map_err(|e| IngestError::Json(format!("{}: {e}", at("id"))))?;
            }
            other => {
                let class = vocab
                    .component_class(other)
                    .map_err(|e| IngestError::Json(format!("{}: {e}", at("class"))))?;
                let name = node.name.clone().unwrap_or_else(|| node.id.clone());
                let position = node.position.map(|[x, y]| (x, y));
                builder
                    .add_component(&node.id, class, &name, position)
                    .map_err(|e| IngestError::Json(format!("{}: {e}", at("id"))))?;
            }
        }
        for (j, port) in node.ports.iter().flatten().enumerate() {
            builder
                .add_port(&port.id, &node.id, &port.name)
                .map_err(|e| IngestError::Json(format!("nodes[{i}].ports[{j}]: {e}")))?;
        }
    }
    for (i, edge) in parsed.edges.iter().enumerate() {
        builder
            .connect(&edge.from, &edge.to)
            .map_err(|e| IngestError::Json(format!("edges[{i}]: {e}")))?;
    }
    Ok(builder.build()?)
}

/// Writes a graph back to the JSON exchange format (deterministic node and
/// edge order). Annotations have no place in this format and are dropped.
pub fn to_json_graph(graph: &CircuitGraph) -> String {
    let mut nodes = Vec::new();
    let push_node = |nodes: &mut Vec<JsonNode>, id: &crate::model::NodeId, class: String, name: Option<String>, position: Option<[i64; 2]>, graph: &CircuitGraph| {
        let ports: Vec<JsonPort> = graph
            .ports_of(id)
            .map(|(pid, p)| JsonPort {
                id: pid.to_string(),
                name: p.name.clone(),
            })
            .collect();
        nodes.push(JsonNode {
            id: id.to_string(),
            class,
            name,
            ports: if ports.is_empty() { None } else { Some(ports) },
            position,
        });
    };
    for view in graph.components() {
        push_node(
            &mut nodes,
            view.id,
            view.class.name().to_string(),
            Some(view.name.to_string()),
            view.position.map(|(x, y)| [x, y]),
            graph,
        );
    }
    for id in graph.junctions() {
        push_node(&mut nodes, id, "JUNCTION".into(), None, None, graph);
    }
    for id in graph.crossovers() {
        push_node(&mut nodes, id, "CROSSOVER".into(), None, None, graph);
    }
    nodes.sort_by(|a, b| a.id.cmp(&b.id));
    let edges: Vec<JsonEdge> = graph
        .connections()
        .map(|(a, b)| JsonEdge {
            from: a.to_string(),
            to: b.to_string(),
        })
        .collect();
    serde_json::to_string_pretty(&JsonGraph { nodes, edges }).expect("graph serializes") + "\n"
}
