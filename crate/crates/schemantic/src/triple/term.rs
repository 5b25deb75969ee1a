//! Terms and triples, the atoms of the graph representation.

use std::fmt;
use std::sync::Arc;

/// Shared term text. Terms are copied around heavily during rule
/// evaluation, so the payload is reference counted.
pub type Atom = Arc<str>;

/// A single node of the graph: a namespace-qualified IRI, a plain string
/// literal, or (inside rule patterns only) a variable.
///
/// The `Ord` derive makes stores and serializations canonical: terms sort
/// by kind first, then by text.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// Namespace-qualified name such as `w:connects` or `w:R1`.
    Iri(Atom),
    /// Plain string literal, e.g. a port name like `a_1`.
    Literal(Atom),
    /// Named variable such as `?owner`. Never stored in a [`TripleStore`](super::TripleStore).
    Variable(Atom),
}

impl Term {
    /// Builds an IRI term from a `prefix:local` name.
    ///
    /// Panics if `name` is not a valid qualified name; use [`Term::try_iri`]
    /// for text from untrusted sources.
    pub fn iri(name: impl AsRef<str>) -> Term {
        match Term::try_iri(name.as_ref()) {
            Some(t) => t,
            None => panic!("invalid qualified IRI name: {:?}", name.as_ref()),
        }
    }

    /// Builds an IRI term, returning `None` unless `name` has the shape
    /// `prefix:local` with both parts non-empty.
    pub fn try_iri(name: &str) -> Option<Term> {
        if is_valid_qname(name) {
            Some(Term::Iri(Atom::from(name)))
        } else {
            None
        }
    }

    pub fn literal(value: impl AsRef<str>) -> Term {
        Term::Literal(Atom::from(value.as_ref()))
    }

    /// Builds a variable term; `name` is the bare name without the `?` sigil.
    pub fn variable(name: impl AsRef<str>) -> Term {
        Term::Variable(Atom::from(name.as_ref()))
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }

    /// The raw text of the term, without sigils or quotes.
    pub fn text(&self) -> &str {
        match self {
            Term::Iri(s) | Term::Literal(s) | Term::Variable(s) => s,
        }
    }

    /// Namespace prefix of an IRI term (`w` for `w:connects`).
    pub fn prefix(&self) -> Option<&str> {
        match self {
            Term::Iri(s) => s.split_once(':').map(|(p, _)| p),
            _ => None,
        }
    }

    /// Local part of an IRI term (`connects` for `w:connects`).
    pub fn local(&self) -> Option<&str> {
        match self {
            Term::Iri(s) => s.split_once(':').map(|(_, l)| l),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(s) => write!(f, "{s}"),
            Term::Literal(s) => write!(f, "\"{}\"", escape_literal(s)),
            Term::Variable(s) => write!(f, "?{s}"),
        }
    }
}

/// Checks the `prefix:local` shape: exactly one `:` separating a non-empty
/// prefix and a non-empty local part, both drawn from name characters.
pub fn is_valid_qname(s: &str) -> bool {
    let Some((prefix, local)) = s.split_once(':') else {
        return false;
    };
    is_valid_prefix(prefix) && is_valid_local(local)
}

pub(crate) fn is_valid_prefix(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn is_valid_local(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    if !chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.')) {
        return false;
    }
    !s.ends_with('.')
}

/// Escapes a literal for quoting inside `"..."`.
pub fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            _ => out.push(c),
        }
    }
    out
}

/// A subject–predicate–object statement.
///
/// When stored, subject and predicate are always IRIs; objects may also be
/// literals. Patterns with variables use the same `Term` type but live in
/// rule bodies, never in a store.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Triple {
        Triple {
            subject,
            predicate,
            object,
        }
    }

    /// True if no position holds a variable.
    pub fn is_ground(&self) -> bool {
        !self.subject.is_variable() && !self.predicate.is_variable() && !self.object.is_variable()
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}
