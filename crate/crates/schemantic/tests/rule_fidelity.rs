//! The shipped preprocessing rules, exercised on the micro-topologies they
//! were written for and cross-checked against brute-force oracles,
//! plus dedicated tests for the two amendments (junction self-loop guard,
//! crossover dead-premise removal).

mod common;

use std::collections::BTreeSet;

use schemantic::library::builtin_preprocessing;
use schemantic::rules::{apply_to_fixpoint, parse_rules};
use schemantic::triple::{Term, Triple, TripleStore};

use common::{connects_pairs, junction_closure_oracle, naive_closure};

fn t(s: &str, p: &str, o: &str) -> Triple {
    Triple::new(Term::iri(s), Term::iri(p), Term::iri(o))
}

fn store_of(triples: &[Triple]) -> TripleStore {
    triples.iter().cloned().collect()
}

/// Runs the shipped preprocessing rules and the naive oracle over the same
/// input and asserts identical results.
fn check_against_oracle(initial: &[Triple]) -> TripleStore {
    let pre = builtin_preprocessing();
    let mut store = store_of(initial);
    pre.apply(&mut store);
    let oracle: BTreeSet<Triple> = naive_closure(initial, &pre.combined());
    let engine: BTreeSet<Triple> = store.iter().collect();
    assert_eq!(engine, oracle, "engine disagrees with brute-force closure");
    store
}

#[test]
fn symmetry_adds_the_reverse_triple() {
    let store = check_against_oracle(&[t("w:d1", "w:connects", "w:j1")]);
    assert!(store.contains(&t("w:j1", "w:connects", "w:d1")));
    assert_eq!(store.len(), 2);
}

#[test]
fn junction_star_produces_all_ordered_pairs() {
    for k in 2..=5 {
        let members: Vec<String> = (0..k).map(|i| format!("w:c{i}")).collect();
        let mut initial = vec![t("w:j1", "rdf:type", "w:JUNCTION")];
        for m in &members {
            initial.push(t(m, "w:connects", "w:j1"));
        }
        let store = check_against_oracle(&initial);

        let mut component_pairs = 0;
        for a in &members {
            for b in &members {
                let triple = t(a, "w:connects", b);
                if a == b {
                    assert!(!store.contains(&triple), "self loop {triple}");
                } else {
                    assert!(store.contains(&triple), "missing {triple}");
                    component_pairs += 1;
                }
            }
        }
        assert_eq!(component_pairs, k * (k - 1), "k·(k−1) ordered pairs for k={k}");

        // And the graph-level closure oracle agrees on the full relation.
        let connects: Vec<(String, String)> = members
            .iter()
            .map(|m| (m.clone(), "w:j1".to_string()))
            .collect();
        let junctions: BTreeSet<String> = ["w:j1".to_string()].into_iter().collect();
        assert_eq!(
            connects_pairs(&store),
            junction_closure_oracle(&connects, &junctions)
        );
    }
}

#[test]
fn port_resolution_connects_to_the_owner() {
    let store = check_against_oracle(&[
        t("w:r1", "w:has_part", "w:r1_1"),
        t("w:r1_1", "rdf:type", "w:PORT"),
        t("w:x", "w:connects", "w:r1_1"),
    ]);
    assert!(store.contains(&t("w:x", "w:connects", "w:r1")));
}

#[test]
fn crossover_connects_opposite_port_partners_only() {
    let mut initial = vec![t("w:co", "rdf:type", "w:CROSSOVER")];
    for (port, name) in [
        ("w:co_a1", "a_1"),
        ("w:co_a2", "a_2"),
        ("w:co_b1", "b_1"),
        ("w:co_b2", "b_2"),
    ] {
        initial.push(t("w:co", "w:has_part", port));
        initial.push(t(port, "rdf:type", "w:PORT"));
        initial.push(Triple::new(
            Term::iri(port),
            Term::iri("w:name"),
            Term::literal(name),
        ));
    }
    initial.push(t("w:ra", "w:connects", "w:co_a1"));
    initial.push(t("w:rb", "w:connects", "w:co_a2"));
    initial.push(t("w:rc", "w:connects", "w:co_b1"));
    initial.push(t("w:rd", "w:connects", "w:co_b2"));

    let store = check_against_oracle(&initial);
    assert!(store.contains(&t("w:ra", "w:connects", "w:rb")));
    assert!(store.contains(&t("w:rb", "w:connects", "w:ra")));
    assert!(store.contains(&t("w:rc", "w:connects", "w:rd")));
    // The two line pairs stay electrically separate.
    for a in ["w:ra", "w:rb"] {
        for b in ["w:rc", "w:rd"] {
            assert!(!store.contains(&t(a, "w:connects", b)), "{a} must not reach {b}");
        }
    }
}

/// Without the distinctness guard, junction resolution combined with
/// symmetry derives (a connects a) for every star member. The shipped rule
/// carries the guard; this pins down exactly what it changes.
#[test]
fn unguarded_junction_rule_derives_self_loops() {
    let unguarded = parse_rules(
        "[electSymm: (?a w:connects ?b) -> (?b w:connects ?a)]
         [byJ: (?a w:connects ?junction), (?junction w:connects ?c),
               (?junction rdf:type w:JUNCTION)
               -> (?a w:connects ?c)]",
    )
    .unwrap();
    let initial = vec![
        t("w:r1", "w:connects", "w:j1"),
        t("w:c1", "w:connects", "w:j1"),
        t("w:j1", "rdf:type", "w:JUNCTION"),
    ];
    let mut store = store_of(&initial);
    apply_to_fixpoint(&mut store, &unguarded);
    assert!(store.contains(&t("w:r1", "w:connects", "w:r1")));
    assert!(store.contains(&t("w:c1", "w:connects", "w:c1")));

    // Same input through the shipped (guarded) rules: no self loops.
    let shipped = check_against_oracle(&initial);
    assert!(!shipped.contains(&t("w:r1", "w:connects", "w:r1")));
    assert!(!shipped.contains(&t("w:c1", "w:connects", "w:c1")));
}

/// Derived connects-triples are bounded by n² where n is the number of
/// subject/object terms initially in the store, and the store is safe to
/// share across threads for read-only matching.
#[test]
fn derived_connects_stay_within_the_term_square_bound() {
    fn assert_sync<T: Send + Sync>() {}
    assert_sync::<TripleStore>();
    assert_sync::<schemantic::model::CircuitGraph>();

    let pre = builtin_preprocessing();
    for k in [2usize, 5, 9] {
        let mut initial = vec![t("w:j1", "rdf:type", "w:JUNCTION")];
        let mut terms: BTreeSet<String> = BTreeSet::new();
        for i in 0..k {
            let m = format!("w:c{i}");
            initial.push(t(&m, "w:connects", "w:j1"));
            terms.insert(m);
        }
        terms.insert("w:j1".into());
        terms.insert("w:JUNCTION".into());
        let n = terms.len();

        let mut store = store_of(&initial);
        let before = connects_pairs(&store).len();
        pre.apply(&mut store);
        let derived = connects_pairs(&store).len() - before;
        assert!(
            derived <= n * n,
            "k={k}: {derived} derived connects exceed n²={}",
            n * n
        );
    }
}

/// The crossover rule as originally stated binds a junction variable it
/// never uses. With that premise kept, the rule cannot fire on a circuit
/// that has no junction at all; the shipped rule drops the premise.
#[test]
fn crossover_dead_premise_blocks_junction_free_circuits() {
    let with_dead_premise = parse_rules(
        "[resCro: (?a w:connects ?co_a1),
                  (?b w:connects ?co_a2),
                  (?co rdf:type w:CROSSOVER),
                  (?co_a1 w:name a_1),
                  (?co_a2 w:name a_2),
                  (?co_a1 rdf:type w:PORT),
                  (?co_a2 rdf:type w:PORT),
                  (?co w:has_part ?co_a1),
                  (?co w:has_part ?co_a2),
                  (?junction rdf:type w:JUNCTION)
                  -> (?a w:connects ?b)]",
    )
    .unwrap();
    let mut initial = vec![t("w:co", "rdf:type", "w:CROSSOVER")];
    for (port, name) in [("w:co_a1", "a_1"), ("w:co_a2", "a_2")] {
        initial.push(t("w:co", "w:has_part", port));
        initial.push(t(port, "rdf:type", "w:PORT"));
        initial.push(Triple::new(
            Term::iri(port),
            Term::iri("w:name"),
            Term::literal(name),
        ));
    }
    initial.push(t("w:ra", "w:connects", "w:co_a1"));
    initial.push(t("w:rb", "w:connects", "w:co_a2"));

    let mut store = store_of(&initial);
    let run = apply_to_fixpoint(&mut store, &with_dead_premise);
    assert_eq!(run.added, 0, "dead premise finds no junction, rule never fires");

    // The shipped rules resolve the crossover regardless.
    let shipped = check_against_oracle(&initial);
    assert!(shipped.contains(&t("w:ra", "w:connects", "w:rb")));
}
