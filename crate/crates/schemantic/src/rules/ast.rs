//! Rule data model: patterns, guards, rules, rule sets, and derivations.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::triple::{Atom, Bindings, Term, Triple};

/// A triple pattern; any position may hold a variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl TriplePattern {
    pub fn new(subject: Term, predicate: Term, object: Term) -> TriplePattern {
        TriplePattern {
            subject,
            predicate,
            object,
        }
    }

    pub fn terms(&self) -> [&Term; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    pub fn variables(&self) -> impl Iterator<Item = &Atom> {
        self.terms().into_iter().filter_map(|t| match t {
            Term::Variable(name) => Some(name),
            _ => None,
        })
    }

    pub fn is_ground(&self) -> bool {
        self.variables().next().is_none()
    }

    /// Instantiates the pattern under a binding environment. Returns `None`
    /// if any variable is unbound.
    pub fn substitute(&self, bindings: &Bindings) -> Option<Triple> {
        let resolve = |t: &Term| -> Option<Term> {
            match t {
                Term::Variable(name) => bindings.get(name).cloned(),
                other => Some(other.clone()),
            }
        };
        Some(Triple::new(
            resolve(&self.subject)?,
            resolve(&self.predicate)?,
            resolve(&self.object)?,
        ))
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {} {})", self.subject, self.predicate, self.object)
    }
}

/// A built-in body guard. Only `notEqual` exists; the enumeration leaves room
/// for more.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Guard {
    NotEqual(Atom, Atom),
}

impl Guard {
    pub fn variables(&self) -> [&Atom; 2] {
        match self {
            Guard::NotEqual(a, b) => [a, b],
        }
    }

    /// Whether the guard holds under `bindings`; `None` if a variable is
    /// still unbound.
    pub fn check(&self, bindings: &Bindings) -> Option<bool> {
        match self {
            Guard::NotEqual(a, b) => Some(bindings.get(a)? != bindings.get(b)?),
        }
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guard::NotEqual(a, b) => write!(f, "notEqual(?{a}, ?{b})"),
        }
    }
}

/// One element of a rule body, in source order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BodyAtom {
    Pattern(TriplePattern),
    Guard(Guard),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate rule name '{0}'")]
    DuplicateName(String),
    #[error("rule '{rule}': head variable ?{variable} is not bound in the body")]
    UnboundHeadVariable { rule: String, variable: String },
    #[error("rule '{rule}': guard variable ?{variable} does not occur in any body pattern")]
    UnboundGuardVariable { rule: String, variable: String },
    #[error(
        "rule '{rule}': body pattern {pattern} has no ground position and shares no variable \
         with the rest of the body"
    )]
    UnconstrainedPattern { rule: String, pattern: usize },
}

/// A named forward-chaining rule: body atoms (patterns and guards, evaluated
/// left to right) and one or more head patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub body: Vec<BodyAtom>,
    pub head: Vec<TriplePattern>,
    /// Where the rule came from (file path or a synthetic tag).
    pub source: Option<String>,
}

impl Rule {
    pub fn body_patterns(&self) -> impl Iterator<Item = &TriplePattern> {
        self.body.iter().filter_map(|a| match a {
            BodyAtom::Pattern(p) => Some(p),
            BodyAtom::Guard(_) => None,
        })
    }

    pub fn guards(&self) -> impl Iterator<Item = &Guard> {
        self.body.iter().filter_map(|a| match a {
            BodyAtom::Guard(g) => Some(g),
            BodyAtom::Pattern(_) => None,
        })
    }

    fn body_variables(&self) -> BTreeSet<&Atom> {
        self.body_patterns().flat_map(|p| p.variables()).collect()
    }

    /// Range restriction and related well-formedness checks:
    /// every head and guard variable occurs in a body pattern, and every
    /// body pattern is anchored by a ground position or a shared variable.
    pub fn validate(&self) -> Result<(), RuleError> {
        let bound = self.body_variables();
        for head in &self.head {
            for var in head.variables() {
                if !bound.contains(var) {
                    return Err(RuleError::UnboundHeadVariable {
                        rule: self.name.clone(),
                        variable: var.to_string(),
                    });
                }
            }
        }
        for guard in self.guards() {
            for var in guard.variables() {
                if !bound.contains(var) {
                    return Err(RuleError::UnboundGuardVariable {
                        rule: self.name.clone(),
                        variable: var.to_string(),
                    });
                }
            }
        }
        let patterns: Vec<&TriplePattern> = self.body_patterns().collect();
        for (i, pattern) in patterns.iter().enumerate() {
            if pattern.terms().iter().any(|t| !t.is_variable()) {
                continue;
            }
            let shares = pattern.variables().any(|v| {
                patterns
                    .iter()
                    .enumerate()
                    .any(|(j, other)| j != i && other.variables().any(|w| w == v))
            });
            if !shares {
                return Err(RuleError::UnconstrainedPattern {
                    rule: self.name.clone(),
                    pattern: i + 1,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:", self.name)?;
        for (i, atom) in self.body.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            match atom {
                BodyAtom::Pattern(p) => write!(f, "{sep}{p}")?,
                BodyAtom::Guard(g) => write!(f, "{sep}{g}")?,
            }
        }
        write!(f, " ->")?;
        for (i, p) in self.head.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            write!(f, "{sep}{p}")?;
        }
        write!(f, "]")
    }
}

/// An ordered collection of rules with pairwise-distinct names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleSet {
    rules: Vec<Rule>,
}

impl RuleSet {
    pub fn empty() -> RuleSet {
        RuleSet::default()
    }

    /// Builds a rule set, validating every rule and rejecting duplicate names.
    pub fn from_rules<I: IntoIterator<Item = Rule>>(rules: I) -> Result<RuleSet, RuleError> {
        let mut set = RuleSet::default();
        for rule in rules {
            set.push(rule)?;
        }
        Ok(set)
    }

    pub fn push(&mut self, rule: Rule) -> Result<(), RuleError> {
        rule.validate()?;
        if self.rules.iter().any(|r| r.name == rule.name) {
            return Err(RuleError::DuplicateName(rule.name));
        }
        self.rules.push(rule);
        Ok(())
    }

    /// Appends all rules of `other`, still enforcing name uniqueness.
    pub fn merge(&mut self, other: RuleSet) -> Result<(), RuleError> {
        for rule in other.rules {
            self.push(rule)?;
        }
        Ok(())
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }

    /// Removes and returns a rule by name.
    pub fn take(&mut self, name: &str) -> Option<Rule> {
        let idx = self.rules.iter().position(|r| r.name == name)?;
        Some(self.rules.remove(idx))
    }
}

/// A record of one rule firing: the derived triple, the rule that produced
/// it, and the variable assignment that fired it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub triple: Triple,
    pub rule: String,
    pub bindings: Bindings,
}
