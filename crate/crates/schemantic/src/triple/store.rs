//! An indexed, set-semantics triple store with pattern matching.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::term::{Atom, Term, Triple};

/// A variable assignment produced by pattern matching.
pub type Bindings = BTreeMap<Atom, Term>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StoreError {
    #[error("cannot store a triple containing a variable: {0}")]
    VariableInData(Triple),
    #[error("stored subjects must be IRIs: {0}")]
    NonIriSubject(Triple),
    #[error("stored predicates must be IRIs: {0}")]
    NonIriPredicate(Triple),
}

type NestedIndex = BTreeMap<Term, BTreeMap<Term, BTreeSet<Term>>>;

/// Set of ground triples indexed three ways (subject→predicate→object,
/// predicate→object→subject, object→subject→predicate), which covers every
/// single-pattern lookup without a full scan.
///
/// All internal maps are ordered, so iteration — and everything derived from
/// it, including serializations and rule evaluation order — is deterministic
/// regardless of insertion order.
#[derive(Debug, Clone, Default)]
pub struct TripleStore {
    len: usize,
    spo: NestedIndex,
    pos: NestedIndex,
    osp: NestedIndex,
}

impl TripleStore {
    pub fn new() -> TripleStore {
        TripleStore::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Inserts a triple. Returns `Ok(true)` if it was newly added, `Ok(false)`
    /// if it was already present. Triples containing variables, or with a
    /// non-IRI subject or predicate, are rejected.
    pub fn insert(&mut self, t: Triple) -> Result<bool, StoreError> {
        if !t.is_ground() {
            return Err(StoreError::VariableInData(t));
        }
        if !t.subject.is_iri() {
            return Err(StoreError::NonIriSubject(t));
        }
        if !t.predicate.is_iri() {
            return Err(StoreError::NonIriPredicate(t));
        }
        let added = self
            .spo
            .entry(t.subject.clone())
            .or_default()
            .entry(t.predicate.clone())
            .or_default()
            .insert(t.object.clone());
        if added {
            self.len += 1;
            self.pos
                .entry(t.predicate.clone())
                .or_default()
                .entry(t.object.clone())
                .or_default()
                .insert(t.subject.clone());
            self.osp
                .entry(t.object)
                .or_default()
                .entry(t.subject)
                .or_default()
                .insert(t.predicate);
        }
        Ok(added)
    }

    /// Inserts every triple of an iterator, returning how many were new.
    pub fn insert_all<I: IntoIterator<Item = Triple>>(
        &mut self,
        triples: I,
    ) -> Result<usize, StoreError> {
        let mut added = 0;
        for t in triples {
            if self.insert(t)? {
                added += 1;
            }
        }
        Ok(added)
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.spo
            .get(&t.subject)
            .and_then(|pm| pm.get(&t.predicate))
            .is_some_and(|os| os.contains(&t.object))
    }

    /// Iterates all triples in canonical (subject, predicate, object) order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().flat_map(|(s, pm)| {
            pm.iter().flat_map(move |(p, os)| {
                os.iter()
                    .map(move |o| Triple::new(s.clone(), p.clone(), o.clone()))
            })
        })
    }

    pub fn triples(&self) -> Vec<Triple> {
        self.iter().collect()
    }

    /// All triples matching a partially specified statement, where `None`
    /// positions are wildcards. Each given position must be a ground term.
    pub fn matching(
        &self,
        subject: Option<&Term>,
        predicate: Option<&Term>,
        object: Option<&Term>,
    ) -> Vec<Triple> {
        let mut out = Vec::new();
        match (subject, predicate, object) {
            (Some(s), Some(p), Some(o)) => {
                let t = Triple::new(s.clone(), p.clone(), o.clone());
                if self.contains(&t) {
                    out.push(t);
                }
            }
            (Some(s), Some(p), None) => {
                if let Some(os) = self.spo.get(s).and_then(|pm| pm.get(p)) {
                    out.extend(
                        os.iter()
                            .map(|o| Triple::new(s.clone(), p.clone(), o.clone())),
                    );
                }
            }
            (Some(s), None, Some(o)) => {
                if let Some(ps) = self.osp.get(o).and_then(|sm| sm.get(s)) {
                    out.extend(
                        ps.iter()
                            .map(|p| Triple::new(s.clone(), p.clone(), o.clone())),
                    );
                }
            }
            (Some(s), None, None) => {
                if let Some(pm) = self.spo.get(s) {
                    for (p, os) in pm {
                        out.extend(
                            os.iter()
                                .map(|o| Triple::new(s.clone(), p.clone(), o.clone())),
                        );
                    }
                }
            }
            (None, Some(p), Some(o)) => {
                if let Some(ss) = self.pos.get(p).and_then(|om| om.get(o)) {
                    out.extend(
                        ss.iter()
                            .map(|s| Triple::new(s.clone(), p.clone(), o.clone())),
                    );
                }
            }
            (None, Some(p), None) => {
                if let Some(om) = self.pos.get(p) {
                    for (o, ss) in om {
                        out.extend(
                            ss.iter()
                                .map(|s| Triple::new(s.clone(), p.clone(), o.clone())),
                        );
                    }
                }
            }
            (None, None, Some(o)) => {
                if let Some(sm) = self.osp.get(o) {
                    for (s, ps) in sm {
                        out.extend(
                            ps.iter()
                                .map(|p| Triple::new(s.clone(), p.clone(), o.clone())),
                        );
                    }
                }
            }
            (None, None, None) => out.extend(self.iter()),
        }
        out
    }

    /// Matches a pattern whose positions may be variables, returning every
    /// assignment of the variables for which the substituted triple is in the
    /// store. A fully ground pattern yields zero or one empty bindings.
    ///
    /// Repeated variables constrain positions to be equal, e.g.
    /// `(?x, w:connects, ?x)` only matches self-loops.
    pub fn match_pattern(&self, subject: &Term, predicate: &Term, object: &Term) -> Vec<Bindings> {
        self.match_pattern_with(subject, predicate, object, &Bindings::new())
    }

    /// Like [`match_pattern`](Self::match_pattern) but extending an existing
    /// binding environment: variables already bound act as ground terms, and
    /// each result contains the seed bindings plus any newly bound variables.
    pub fn match_pattern_with(
        &self,
        subject: &Term,
        predicate: &Term,
        object: &Term,
        seed: &Bindings,
    ) -> Vec<Bindings> {
        let resolve = |t: &Term| -> Term {
            match t {
                Term::Variable(name) => seed.get(name).cloned().unwrap_or_else(|| t.clone()),
                _ => t.clone(),
            }
        };
        let s = resolve(subject);
        let p = resolve(predicate);
        let o = resolve(object);
        let ground = |t: &Term| -> Option<Term> {
            if t.is_variable() {
                None
            } else {
                Some(t.clone())
            }
        };
        let candidates = self.matching(ground(&s).as_ref(), ground(&p).as_ref(), ground(&o).as_ref());
        let mut out = Vec::with_capacity(candidates.len());
        'next: for t in candidates {
            let mut b = seed.clone();
            for (pat, val) in [(&s, &t.subject), (&p, &t.predicate), (&o, &t.object)] {
                if let Term::Variable(name) = pat {
                    match b.get(name) {
                        Some(bound) if bound != val => continue 'next,
                        Some(_) => {}
                        None => {
                            b.insert(name.clone(), val.clone());
                        }
                    }
                }
            }
            out.push(b);
        }
        out
    }
}

impl FromIterator<Triple> for TripleStore {
    /// Collects ground triples into a store, panicking on invalid triples;
    /// use [`TripleStore::insert`] for fallible construction.
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut store = TripleStore::new();
        for t in iter {
            store.insert(t).expect("invalid triple in FromIterator");
        }
        store
    }
}
