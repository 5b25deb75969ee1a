//! Rule language and forward-chaining engine.

mod ast;
mod engine;
mod parser;

pub use ast::{BodyAtom, Derivation, Guard, Rule, RuleError, RuleSet, TriplePattern};
pub use engine::{apply_to_fixpoint, explain, query, query_seeded, FixpointRun};
pub use parser::{parse_rules, parse_rules_named};
