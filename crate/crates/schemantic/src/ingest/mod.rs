//! Schematic ingestion: KiCad files and the JSON recognition-output format.

mod json;
mod kicad;
mod sexpr;

use thiserror::Error;

use crate::model::GraphError;

pub use json::{load_json_graph, to_json_graph};
pub use kicad::{
    build_netlist, extract_schematic, load_kicad, NetlistResult, Point, SchPin, SchSymbol,
    SchematicSubset, SymbolClassMap,
};
pub use sexpr::{parse_sexpr, SExpr, SexprError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IngestError {
    #[error(transparent)]
    Sexpr(#[from] SexprError),
    #[error("schematic: {0}")]
    Schematic(String),
    #[error("symbol in lib '{lib_id}' has no Reference property")]
    MissingReference { lib_id: String },
    #[error("symbol {reference} ({lib_id}) has no pins")]
    SymbolWithoutPins { reference: String, lib_id: String },
    #[error("off-grid coordinate '{0}': finer than 0.01 mm")]
    OffGrid(String),
    #[error("symbol map line {line}: {message}")]
    SymbolMap { line: usize, message: String },
    #[error("json graph: {0}")]
    JsonSyntax(String),
    #[error("json graph: {0}")]
    Json(String),
    #[error(transparent)]
    Graph(GraphError),
}
