//! Schemantic turns electrical schematics into an RDF-style triple graph,
//! normalizes the graph with forward-chaining preprocessing rules, and
//! derives human-readable functional annotations (e.g. "flyback diode") for
//! individual components.
//!
//! The crate is organized along the pipeline:
//!
//! - [`triple`] — terms, triples, the indexed store, and Turtle I/O
//! - [`rules`] — the rule language and the semi-naive fixpoint engine
//! - [`model`] — vocabulary, typed circuit graphs, Wikidata links
//! - [`ingest`] — KiCad schematics and the JSON recognition format
//! - [`library`] — the shipped rules and [`library::run_pipeline`]
//! - [`cli`] — the `schemantic` command-line front end
//!
//! The guide under `book/` walks through each stage with runnable
//! examples; its snippets double as this crate's doc-tests.

#[cfg(doctest)]
pub mod book;
pub mod cli;
pub mod ingest;
pub mod library;
pub mod model;
pub mod rules;
pub mod triple;
