//! The ingest → preprocess → annotate pipeline.

use std::collections::HashSet;

use thiserror::Error;

use crate::model::vocab::iri;
use crate::model::{
    CircuitGraph, FunctionAnnotation, GraphError, NodeId, NodeKind, VocabError, Vocabulary,
};
use crate::rules::{
    apply_to_fixpoint, query, query_seeded, BodyAtom, Derivation, RuleError, RuleSet,
};
use crate::triple::{Term, Triple, TripleStore};

use super::builtin::{builtin_preprocessing, AnnotationRuleFile, LibraryError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Rules(#[from] RuleError),
    #[error(transparent)]
    Library(#[from] LibraryError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Vocab(#[from] VocabError),
}

/// Everything a pipeline run produces.
#[derive(Debug)]
pub struct PipelineOutput {
    /// The input graph with derived annotations attached.
    pub graph: CircuitGraph,
    /// Triple form of the input graph, untouched.
    pub raw: TripleStore,
    /// Triple form of the annotated graph: raw plus `w:has_function`
    /// statements (and links for newly used function classes). Reasoning
    /// scaffolding is excluded.
    pub enriched: TripleStore,
    /// Connects-triples derived by preprocessing, for opt-in debug output.
    pub derived_connects: Vec<Triple>,
    /// All rule firings, preprocessing and annotation, in derivation order.
    pub derivations: Vec<Derivation>,
    /// Non-fatal oddities (e.g. annotations on non-components).
    pub warnings: Vec<String>,
    /// The full working store after all stages, including reasoning
    /// scaffolding; useful for debugging and soundness checks.
    pub working: TripleStore,
}

impl PipelineOutput {
    /// The enriched store plus the preprocessing-derived connects triples.
    pub fn enriched_with_derived_connects(&self) -> TripleStore {
        let mut store = self.enriched.clone();
        store
            .insert_all(self.derived_connects.iter().cloned())
            .expect("derived triples are ground");
        store
    }
}

/// Runs the full reasoning pipeline over a circuit graph:
/// triples → staged preprocessing fixpoint → annotation fixpoint over all
/// rule files → guarded final stage → annotated graph.
///
/// The serialized result is the union of the raw triples and the derived
/// function annotations; preprocessing-derived connects triples are
/// scaffolding and stay out of `enriched`.
pub fn run_pipeline(
    graph: &CircuitGraph,
    vocab: &Vocabulary,
    rule_files: &[AnnotationRuleFile],
) -> Result<PipelineOutput, PipelineError> {
    let raw = graph.to_triples(vocab);
    let mut working = raw.clone();
    working
        .insert_all(vocab.axiom_triples())
        .expect("axioms are ground");

    let mut derivations: Vec<Derivation> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut record = |derivations: &mut Vec<Derivation>, d: Derivation| {
        let key = format!("{}|{}|{:?}", d.rule, d.triple, d.bindings);
        if seen.insert(key) {
            derivations.push(d);
        }
    };

    // Stage 1: structural preprocessing.
    let preprocessing = builtin_preprocessing();
    let (_, pre_derivations) = preprocessing.apply(&mut working);
    let connects = Term::iri(iri::CONNECTS);
    let mut derived_connects: Vec<Triple> = pre_derivations
        .iter()
        .filter(|d| d.triple.predicate == connects)
        .map(|d| d.triple.clone())
        .collect();
    derived_connects.sort();
    derived_connects.dedup();
    for d in pre_derivations {
        record(&mut derivations, d);
    }

    // Stage 2: all main annotation rules to one fixpoint; file order is
    // irrelevant for the result (monotone rules), names must be globally
    // unique.
    let mut main_rules = RuleSet::empty();
    for file in rule_files {
        main_rules.merge(file.rules.clone())?;
    }
    let run = apply_to_fixpoint(&mut working, &main_rules);
    for d in run.derivations {
        record(&mut derivations, d);
    }

    // Stage 3: guarded rules, evaluated once against the fixpoint with
    // their absence conditions applied at pipeline level.
    for file in rule_files {
        for guarded in &file.guarded {
            for bindings in query(&working, &guarded.rule.body) {
                let vetoed = guarded.absent.iter().any(|group| {
                    let atoms: Vec<BodyAtom> =
                        group.iter().cloned().map(BodyAtom::Pattern).collect();
                    !query_seeded(&working, &atoms, &bindings).is_empty()
                });
                if vetoed {
                    continue;
                }
                for head in &guarded.rule.head {
                    let triple = head
                        .substitute(&bindings)
                        .expect("guarded rules are range restricted");
                    if !raw.contains(&triple) {
                        record(
                            &mut derivations,
                            Derivation {
                                triple: triple.clone(),
                                rule: guarded.rule.name.clone(),
                                bindings: bindings.clone(),
                            },
                        );
                    }
                    working.insert(triple).expect("heads are ground");
                }
            }
        }
    }

    // Collect annotations from the working store.
    let mut warnings = Vec::new();
    let has_function = Term::iri(iri::HAS_FUNCTION);
    let mut annotations: Vec<FunctionAnnotation> = Vec::new();
    for t in working.matching(None, Some(&has_function), None) {
        let Some(id) = NodeId::from_iri(&t.subject) else {
            warnings.push(format!("annotation on non-instance {} ignored", t.subject));
            continue;
        };
        if !matches!(graph.node(&id), Some(NodeKind::Component { .. })) {
            warnings.push(format!("annotation on non-component {id} ignored"));
            continue;
        }
        let class = vocab.function_class_from_iri(&t.object)?;
        if !annotations
            .iter()
            .any(|a| a.component == id && a.class == class)
        {
            annotations.push(FunctionAnnotation {
                component: id,
                class,
                provenance: Vec::new(),
            });
        }
    }

    let mut annotated = graph.with_annotations(annotations);
    annotated.attach_provenance(&derivations);
    let enriched = annotated.to_triples(vocab);

    Ok(PipelineOutput {
        graph: annotated,
        raw,
        enriched,
        derived_connects,
        derivations,
        warnings,
        working,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::builtin_annotations;
    use crate::model::{ComponentClass, FunctionClass};

    /// Flyback fixture: D1 anti-parallel to L1 through two shared nets.
    fn flyback_graph() -> CircuitGraph {
        let mut b = CircuitGraph::builder();
        b.add_component("D1", ComponentClass::Diode, "D1", None).unwrap();
        b.add_port("D1_1", "D1", "cathode").unwrap();
        b.add_port("D1_2", "D1", "anode").unwrap();
        b.add_component("L1", ComponentClass::Inductor, "L1", None).unwrap();
        b.add_port("L1_1", "L1", "1").unwrap();
        b.add_port("L1_2", "L1", "2").unwrap();
        b.connect("D1_2", "L1_1").unwrap();
        b.connect("D1_1", "L1_2").unwrap();
        b.build().unwrap()
    }

    #[test]
    fn empty_circuit_yields_no_annotations() {
        let mut vocab = Vocabulary::new();
        let files = builtin_annotations(&mut vocab);
        let graph = CircuitGraph::builder().build().unwrap();
        let out = run_pipeline(&graph, &vocab, &files).unwrap();
        assert!(out.graph.annotations().is_empty());
        assert!(out.enriched.is_empty());
    }

    #[test]
    fn flyback_diode_is_annotated_with_provenance() {
        let mut vocab = Vocabulary::new();
        let files = builtin_annotations(&mut vocab);
        let graph = flyback_graph();
        let out = run_pipeline(&graph, &vocab, &files).unwrap();

        let d1 = NodeId::new("D1").unwrap();
        let classes = out.graph.annotations_of(&d1).unwrap();
        assert!(classes.contains(&FunctionClass::FlybackDiode));

        let annotation = &out.graph.annotations()[0];
        assert_eq!(annotation.provenance.len(), 1);
        assert_eq!(annotation.provenance[0].rule, "flybackInductor");

        // The inductor carries nothing.
        let l1 = NodeId::new("L1").unwrap();
        assert!(out.graph.annotations_of(&l1).unwrap().is_empty());
    }

    #[test]
    fn series_diode_is_not_a_flyback() {
        let mut b = CircuitGraph::builder();
        b.add_component("D1", ComponentClass::Diode, "D1", None).unwrap();
        b.add_port("D1_1", "D1", "cathode").unwrap();
        b.add_port("D1_2", "D1", "anode").unwrap();
        b.add_component("L1", ComponentClass::Inductor, "L1", None).unwrap();
        b.add_port("L1_1", "L1", "1").unwrap();
        b.add_port("L1_2", "L1", "2").unwrap();
        b.add_component("R1", ComponentClass::Resistor, "R1", None).unwrap();
        b.add_port("R1_1", "R1", "1").unwrap();
        b.add_port("R1_2", "R1", "2").unwrap();
        // Loop D1 -> L1 -> R1 -> D1: in series, never anti-parallel.
        b.connect("D1_1", "L1_1").unwrap();
        b.connect("L1_2", "R1_1").unwrap();
        b.connect("R1_2", "D1_2").unwrap();
        let graph = b.build().unwrap();

        let mut vocab = Vocabulary::new();
        let files = builtin_annotations(&mut vocab);
        let out = run_pipeline(&graph, &vocab, &files).unwrap();
        assert!(out.graph.annotations().is_empty());
    }

    #[test]
    fn enriched_is_raw_plus_annotations_only() {
        let mut vocab = Vocabulary::new();
        let files = builtin_annotations(&mut vocab);
        let out = run_pipeline(&flyback_graph(), &vocab, &files).unwrap();
        let has_function = Term::iri(iri::HAS_FUNCTION);
        for t in out.enriched.iter() {
            assert!(
                out.raw.contains(&t) || t.predicate == has_function,
                "unexpected enriched triple {t}"
            );
        }
        // Scaffolding stays internal.
        assert!(out
            .enriched
            .matching(None, Some(&Term::iri(iri::ON_SUPPLY)), None)
            .is_empty());
        assert!(out
            .enriched
            .matching(None, Some(&Term::iri(iri::ROLE)), None)
            .is_empty());
        // Derived connects are available separately.
        assert!(!out.derived_connects.is_empty());
        let with = out.enriched_with_derived_connects();
        assert!(with.len() > out.enriched.len());
    }

    #[test]
    fn rerunning_on_annotated_graph_is_stable() {
        let mut vocab = Vocabulary::new();
        let files = builtin_annotations(&mut vocab);
        let first = run_pipeline(&flyback_graph(), &vocab, &files).unwrap();
        let second = run_pipeline(&first.graph, &vocab, &files).unwrap();
        assert_eq!(
            first.enriched.triples(),
            second.enriched.triples(),
            "pipeline must be idempotent on its own output"
        );
        // Already-asserted annotations are asserted, not derived.
        assert!(second.graph.annotations()[0].provenance.is_empty());
    }
}
