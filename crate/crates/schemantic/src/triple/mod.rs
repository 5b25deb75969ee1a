//! The triple substrate: terms, triples, an indexed store, and Turtle I/O.

mod store;
mod term;
pub mod turtle;

pub use store::{Bindings, StoreError, TripleStore};
pub use term::{escape_literal, is_valid_qname, Atom, Term, Triple};
pub use turtle::{Namespaces, TurtleError, RDF_TYPE};
