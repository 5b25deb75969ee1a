//! Forward-chaining evaluation: semi-naive fixpoint over a triple store.
//!
//! Each iteration seeds rule bodies from the facts derived in the previous
//! iteration (the delta) and joins the remaining patterns against the full
//! store, so unchanged parts of the store are not re-joined round after
//! round. Rules are monotone and range restricted, which bounds derivable
//! triples by the terms already present and guarantees termination.

use std::collections::{BTreeSet, HashSet};

use crate::triple::{Atom, Bindings, Term, Triple, TripleStore};

use super::ast::{BodyAtom, Derivation, Rule, RuleSet, TriplePattern};

/// Result of a fixpoint run.
#[derive(Debug, Default)]
pub struct FixpointRun {
    /// Number of triples that were newly added to the store.
    pub added: usize,
    /// One record per distinct (rule, binding, head triple) firing whose
    /// triple was not already asserted in the input store.
    pub derivations: Vec<Derivation>,
}

/// Runs `rules` to the least fixpoint over `store`, mutating it in place.
///
/// Triples already asserted in the input store never get derivations
/// recorded (they are asserted, not derived), but a triple derivable by
/// several distinct rule firings is recorded once per firing.
/// Re-running on the result adds nothing and returns `added == 0`.
pub fn apply_to_fixpoint(store: &mut TripleStore, rules: &RuleSet) -> FixpointRun {
    let initial = store.clone();
    let mut run = FixpointRun::default();
    // (rule index, bindings) pairs already fired, to keep the per-round
    // delta seeding from reporting one firing several times.
    let mut seen: HashSet<(usize, Vec<(Atom, Term)>)> = HashSet::new();

    let mut delta = initial.clone();
    let mut first_round = true;
    while !delta.is_empty() {
        let mut next_delta = TripleStore::new();
        for (rule_index, rule) in rules.rules().iter().enumerate() {
            let pattern_count = rule.body_patterns().count();
            if pattern_count == 0 {
                continue;
            }
            // In the first round the delta is the whole store, so seeding
            // the first pattern alone already covers every firing.
            let seed_positions = if first_round { 1 } else { pattern_count };
            for seed in 0..seed_positions {
                for bindings in evaluate_body(rule, seed, &delta, store) {
                    let key: Vec<(Atom, Term)> =
                        bindings.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
                    if !seen.insert((rule_index, key)) {
                        continue;
                    }
                    for head in &rule.head {
                        let triple = head
                            .substitute(&bindings)
                            .expect("range restriction guarantees ground heads");
                        if !initial.contains(&triple) {
                            run.derivations.push(Derivation {
                                triple: triple.clone(),
                                rule: rule.name.clone(),
                                bindings: bindings.clone(),
                            });
                        }
                        if !store.contains(&triple) {
                            let _ = next_delta.insert(triple);
                        }
                    }
                }
            }
        }
        for triple in next_delta.iter() {
            if store.insert(triple).expect("derived triples are ground") {
                run.added += 1;
            }
        }
        delta = next_delta;
        first_round = false;
    }
    run
}

/// Evaluates a rule body with the `seed`-th body pattern matched against
/// `delta` and all other patterns against `full`, returning every satisfying
/// binding environment. Guards filter as soon as both their variables are
/// bound.
///
/// The remaining patterns are joined in connected order: among patterns
/// sharing a variable with the bound set, the one with the most bound
/// positions goes first (ties keep source order). Conjunction is commutative,
/// so this only affects join cost, never the result set.
fn evaluate_body(
    rule: &Rule,
    seed: usize,
    delta: &TripleStore,
    full: &TripleStore,
) -> Vec<Bindings> {
    let patterns: Vec<&TriplePattern> = rule.body_patterns().collect();
    let seed_pattern = patterns[seed];

    let mut frontier: Vec<Bindings> = delta.match_pattern_with(
        &seed_pattern.subject,
        &seed_pattern.predicate,
        &seed_pattern.object,
        &Bindings::new(),
    );
    apply_ready_guards(rule, &mut frontier);
    if frontier.is_empty() {
        return frontier;
    }

    let mut bound: BTreeSet<&Atom> = seed_pattern.variables().collect();
    let mut remaining: Vec<usize> = (0..patterns.len()).filter(|&i| i != seed).collect();
    while !remaining.is_empty() {
        let next_idx = remaining
            .iter()
            .position(|&i| {
                patterns[i].variables().any(|v| bound.contains(v))
                    || patterns[i].variables().next().is_none()
            })
            .map(|pos| {
                // Among connected candidates, prefer the most constrained one.
                let score = |i: usize| {
                    patterns[i]
                        .terms()
                        .iter()
                        .filter(|t| match t {
                            Term::Variable(name) => bound.contains(name),
                            _ => true,
                        })
                        .count()
                };
                let mut best = pos;
                for (p, &i) in remaining.iter().enumerate().skip(pos + 1) {
                    let connected = patterns[i].variables().any(|v| bound.contains(v))
                        || patterns[i].variables().next().is_none();
                    if connected && score(i) > score(remaining[best]) {
                        best = p;
                    }
                }
                best
            })
            .unwrap_or(0); // disconnected body: fall back to source order
        let pattern = patterns[remaining.remove(next_idx)];
        bound.extend(pattern.variables());

        let mut next = Vec::new();
        for bindings in &frontier {
            next.extend(full.match_pattern_with(
                &pattern.subject,
                &pattern.predicate,
                &pattern.object,
                bindings,
            ));
        }
        frontier = next;
        apply_ready_guards(rule, &mut frontier);
        if frontier.is_empty() {
            break;
        }
    }
    frontier
}

fn apply_ready_guards(rule: &Rule, frontier: &mut Vec<Bindings>) {
    if rule.guards().next().is_none() {
        return;
    }
    frontier.retain(|bindings| {
        rule.guards()
            .all(|guard| guard.check(bindings).unwrap_or(true))
    });
}

/// Matches a conjunctive query (patterns and guards, evaluated left to
/// right) against a store, returning every satisfying binding environment.
pub fn query(store: &TripleStore, atoms: &[BodyAtom]) -> Vec<Bindings> {
    query_seeded(store, atoms, &Bindings::new())
}

/// [`query`] starting from an existing binding environment.
pub fn query_seeded(store: &TripleStore, atoms: &[BodyAtom], seed: &Bindings) -> Vec<Bindings> {
    let mut frontier = vec![seed.clone()];
    for atom in atoms {
        match atom {
            BodyAtom::Pattern(pattern) => {
                let mut next = Vec::new();
                for bindings in &frontier {
                    next.extend(store.match_pattern_with(
                        &pattern.subject,
                        &pattern.predicate,
                        &pattern.object,
                        bindings,
                    ));
                }
                frontier = next;
            }
            BodyAtom::Guard(guard) => {
                frontier.retain(|bindings| guard.check(bindings).unwrap_or(true));
            }
        }
        if frontier.is_empty() {
            break;
        }
    }
    frontier
}

/// All (rule name, bindings) pairs whose derivation produced `triple`.
/// An empty result means the triple was asserted, not derived.
pub fn explain<'a>(
    triple: &Triple,
    derivations: &'a [Derivation],
) -> Vec<(&'a str, &'a Bindings)> {
    derivations
        .iter()
        .filter(|d| &d.triple == triple)
        .map(|d| (d.rule.as_str(), &d.bindings))
        .collect()
}
