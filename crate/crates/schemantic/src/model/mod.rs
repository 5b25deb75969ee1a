//! Circuit ontology: vocabulary, typed graph view, and Wikidata links.

mod graph;
pub mod vocab;
mod wikidata;

pub use graph::{
    CircuitGraph, CircuitGraphBuilder, ComponentView, FunctionAnnotation, GraphError,
    GraphStructure, NodeId, NodeKind, Port, Provenance,
};
pub use vocab::{ComponentClass, FunctionClass, VocabError, Vocabulary};
pub use wikidata::{WikidataError, WikidataLinkTable};
