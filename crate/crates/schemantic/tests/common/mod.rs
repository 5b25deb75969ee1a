//! Shared test support: independent oracles and a random circuit generator.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use schemantic::model::{CircuitGraph, ComponentClass};
use schemantic::rules::{RuleSet, TriplePattern};
use schemantic::triple::{Bindings, Term, Triple, TripleStore};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).expect("fixture readable")
}

/// Independent unification, used only by the oracle below.
fn unify(pattern: &TriplePattern, fact: &Triple, env: &Bindings) -> Option<Bindings> {
    let mut out = env.clone();
    for (p, v) in [
        (&pattern.subject, &fact.subject),
        (&pattern.predicate, &fact.predicate),
        (&pattern.object, &fact.object),
    ] {
        match p {
            Term::Variable(name) => match out.get(name) {
                Some(bound) if bound != v => return None,
                Some(_) => {}
                None => {
                    out.insert(name.clone(), v.clone());
                }
            },
            ground if ground == v => {}
            _ => return None,
        }
    }
    Some(out)
}

/// Brute-force closure oracle: repeatedly enumerates every substitution of
/// every rule body by scanning the whole fact list, with no indexes, no
/// deltas, and no join planning. Deliberately independent of the engine.
pub fn naive_closure(initial: &[Triple], rules: &RuleSet) -> BTreeSet<Triple> {
    let mut facts: BTreeSet<Triple> = initial.iter().cloned().collect();
    loop {
        let mut fresh: Vec<Triple> = Vec::new();
        for rule in rules.rules() {
            let mut envs = vec![Bindings::new()];
            for pattern in rule.body_patterns() {
                let mut next = Vec::new();
                for env in &envs {
                    for fact in &facts {
                        if let Some(extended) = unify(pattern, fact, env) {
                            next.push(extended);
                        }
                    }
                }
                envs = next;
            }
            for env in envs {
                if !rule.guards().all(|g| g.check(&env) == Some(true)) {
                    continue;
                }
                for head in &rule.head {
                    let t = head.substitute(&env).expect("range restricted");
                    if !facts.contains(&t) {
                        fresh.push(t);
                    }
                }
            }
        }
        if fresh.is_empty() {
            return facts;
        }
        facts.extend(fresh);
    }
}

/// Graph-level oracle for symmetry plus junction resolution: the symmetric
/// closure of `connects`, transitively closed through junction nodes, with
/// self-pairs excluded.
pub fn junction_closure_oracle(
    connects: &[(String, String)],
    junctions: &BTreeSet<String>,
) -> BTreeSet<(String, String)> {
    let mut pairs: BTreeSet<(String, String)> = BTreeSet::new();
    for (a, b) in connects {
        pairs.insert((a.clone(), b.clone()));
        pairs.insert((b.clone(), a.clone()));
    }
    loop {
        let mut fresh = Vec::new();
        for (a, j) in &pairs {
            if !junctions.contains(j) {
                continue;
            }
            for (j2, c) in &pairs {
                if j2 == j && a != c && !pairs.contains(&(a.clone(), c.clone())) {
                    fresh.push((a.clone(), c.clone()));
                }
            }
        }
        if fresh.is_empty() {
            return pairs;
        }
        pairs.extend(fresh);
    }
}

/// All `w:connects` statements of a store as string pairs.
pub fn connects_pairs(store: &TripleStore) -> BTreeSet<(String, String)> {
    store
        .matching(None, Some(&Term::iri("w:connects")), None)
        .into_iter()
        .map(|t| (t.subject.text().to_string(), t.object.text().to_string()))
        .collect()
}

/// Deterministic random circuit: components with ports, junctions, supply
/// symbols, and wiring, all structurally valid.
pub fn random_circuit(seed: u64, max_components: usize) -> CircuitGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = CircuitGraph::builder();

    let palette: &[(ComponentClass, &[&str])] = &[
        (ComponentClass::Resistor, &["1", "2"]),
        (ComponentClass::Capacitor, &["1", "2"]),
        (ComponentClass::Inductor, &["1", "2"]),
        (ComponentClass::Diode, &["cathode", "anode"]),
        (ComponentClass::TransistorNpn, &["base", "collector", "emitter"]),
        (ComponentClass::Switch, &["1", "2"]),
        (ComponentClass::Ic, &["1", "2", "3", "4"]),
        (ComponentClass::Led, &["cathode", "anode"]),
        (ComponentClass::Crystal, &["1", "2"]),
        (ComponentClass::VccSymbol, &["1"]),
        (ComponentClass::GndSymbol, &["1"]),
    ];

    let n = rng.gen_range(2..=max_components.max(2));
    let mut ports: Vec<String> = Vec::new();
    for i in 0..n {
        let (class, port_names) = &palette[rng.gen_range(0..palette.len())];
        let id = format!("c{i}");
        b.add_component(&id, class.clone(), &id, None).unwrap();
        for name in *port_names {
            let port_id = format!("{id}_{name}");
            b.add_port(&port_id, &id, name).unwrap();
            ports.push(port_id);
        }
    }
    let junction_count = rng.gen_range(0..=(n / 2).max(1));
    let mut endpoints = ports.clone();
    for i in 0..junction_count {
        let id = format!("j{i}");
        b.add_junction(&id).unwrap();
        endpoints.push(id);
    }
    let wires = rng.gen_range(n..=3 * n);
    for _ in 0..wires {
        let a = &endpoints[rng.gen_range(0..endpoints.len())];
        let c = &endpoints[rng.gen_range(0..endpoints.len())];
        if a != c {
            b.connect(a, c).unwrap();
        }
    }
    b.build().unwrap()
}
