//! Turtle subset: `@prefix` declarations, qualified names, quoted string
//! literals, and plain `subject predicate object .` statements.
//!
//! The parser additionally accepts `#` comments, predicate lists (`;`),
//! object lists (`,`) and the `a` shorthand for `rdf:type`; the serializer
//! never emits any of those. Output is sorted by (subject, predicate,
//! object) so identical stores serialize byte-identically.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use thiserror::Error;

use super::store::TripleStore;
use super::term::{escape_literal, is_valid_prefix, is_valid_qname, Term, Triple};

pub const RDF_TYPE: &str = "rdf:type";

/// Prefix table mapping namespace prefixes to base IRIs.
///
/// The prefix set used by the toolchain is fixed (`w`, `rdf`, `wd`, `fn`);
/// the expansions are configuration and may be overridden by `@prefix`
/// declarations in parsed files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Namespaces {
    map: BTreeMap<String, String>,
}

impl Default for Namespaces {
    fn default() -> Self {
        let mut ns = Namespaces { map: BTreeMap::new() };
        ns.declare("w", "https://schemantic.dev/ns/circuit#");
        ns.declare("fn", "https://schemantic.dev/ns/function#");
        ns.declare("rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#");
        ns.declare("wd", "http://www.wikidata.org/entity/");
        ns
    }
}

impl Namespaces {
    pub fn base_iri(&self, prefix: &str) -> Option<&str> {
        self.map.get(prefix).map(|s| s.as_str())
    }

    pub fn declare(&mut self, prefix: impl Into<String>, base: impl Into<String>) {
        self.map.insert(prefix.into(), base.into());
    }

    pub fn contains(&self, prefix: &str) -> bool {
        self.map.contains_key(prefix)
    }

    /// Expands a qualified name to a full IRI, if the prefix is known.
    pub fn expand(&self, qname: &str) -> Option<String> {
        let (prefix, local) = qname.split_once(':')?;
        self.base_iri(prefix).map(|base| format!("{base}{local}"))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TurtleError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: unknown namespace prefix '{prefix}'")]
    UnknownPrefix {
        line: usize,
        column: usize,
        prefix: String,
    },
}

/// Serializes a store as canonical Turtle: used prefixes first (sorted),
/// then one statement per triple in (subject, predicate, object) order.
pub fn serialize(store: &TripleStore, namespaces: &Namespaces) -> String {
    let mut used = BTreeSet::new();
    for t in store.iter() {
        for term in [&t.subject, &t.predicate, &t.object] {
            if let Some(prefix) = term.prefix() {
                used.insert(prefix.to_string());
            }
        }
    }
    let mut out = String::new();
    for prefix in &used {
        let base = namespaces.base_iri(prefix).unwrap_or("");
        out.push_str(&format!("@prefix {prefix}: <{base}> .\n"));
    }
    if !used.is_empty() && !store.is_empty() {
        out.push('\n');
    }
    // Store iteration is already (s, p, o)-sorted.
    for t in store.iter() {
        out.push_str(&format!(
            "{} {} {} .\n",
            t.subject,
            t.predicate,
            render_object(&t.object)
        ));
    }
    out
}

fn render_object(term: &Term) -> String {
    match term {
        Term::Literal(s) => format!("\"{}\"", escape_literal(s)),
        other => other.to_string(),
    }
}

/// Parses the Turtle subset into a store plus the namespace table in effect
/// (defaults extended by any `@prefix` declarations).
pub fn parse(text: &str) -> Result<(TripleStore, Namespaces), TurtleError> {
    let mut parser = Parser::new(text);
    parser.run()?;
    Ok((parser.store, parser.namespaces))
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    store: TripleStore,
    namespaces: Namespaces,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    QName(String),
    Literal(String),
    Dot,
    Semicolon,
    Comma,
    PrefixKeyword,
    IriRef(String),
    A,
}

impl Parser {
    fn new(text: &str) -> Parser {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            store: TripleStore::new(),
            namespaces: Namespaces::default(),
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, TurtleError> {
        Err(TurtleError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn next_token(&mut self) -> Result<Option<Token>, TurtleError> {
        self.skip_trivia();
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        match c {
            '.' => {
                self.bump();
                Ok(Some(Token::Dot))
            }
            ';' => {
                self.bump();
                Ok(Some(Token::Semicolon))
            }
            ',' => {
                self.bump();
                Ok(Some(Token::Comma))
            }
            '"' => {
                self.bump();
                let mut value = String::new();
                loop {
                    match self.bump() {
                        None => return self.error("unterminated string literal"),
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some('"') => value.push('"'),
                            Some('\\') => value.push('\\'),
                            Some('n') => value.push('\n'),
                            Some('r') => value.push('\r'),
                            Some('t') => value.push('\t'),
                            Some(other) => {
                                return self.error(format!("unsupported escape '\\{other}'"))
                            }
                            None => return self.error("unterminated escape sequence"),
                        },
                        Some(other) => value.push(other),
                    }
                }
                Ok(Some(Token::Literal(value)))
            }
            '<' => {
                self.bump();
                let mut value = String::new();
                loop {
                    match self.bump() {
                        None => return self.error("unterminated IRI reference"),
                        Some('>') => break,
                        Some(other) => value.push(other),
                    }
                }
                Ok(Some(Token::IriRef(value)))
            }
            '@' => {
                self.bump();
                let word = self.take_name_chars();
                if word == "prefix" {
                    Ok(Some(Token::PrefixKeyword))
                } else {
                    self.error(format!("unsupported directive '@{word}'"))
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let word = self.take_name_chars();
                if word == "a" && self.peek() != Some(':') {
                    return Ok(Some(Token::A));
                }
                if self.peek() == Some(':') {
                    self.bump();
                    let local = self.take_name_chars();
                    if local.is_empty() {
                        return self.error(format!("missing local part after '{word}:'"));
                    }
                    Ok(Some(Token::QName(format!("{word}:{local}"))))
                } else {
                    self.error(format!("bare token '{word}' is not valid here"))
                }
            }
            other => self.error(format!("unexpected character '{other}'")),
        }
    }

    /// Name characters; a trailing '.' is left for the statement terminator.
    fn take_name_chars(&mut self) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || matches!(c, '_' | '-') {
                out.push(c);
                self.bump();
            } else if c == '.' {
                // Only part of the name if followed by another name char.
                let next = self.chars.get(self.pos + 1).copied();
                if next.is_some_and(|n| n.is_ascii_alphanumeric() || matches!(n, '_' | '-')) {
                    out.push(c);
                    self.bump();
                } else {
                    break;
                }
            } else {
                break;
            }
        }
        out
    }

    fn expect_dot(&mut self) -> Result<(), TurtleError> {
        match self.next_token()? {
            Some(Token::Dot) => Ok(()),
            other => self.error(format!("expected '.', found {other:?}")),
        }
    }

    fn qname_term(&self, name: &str) -> Result<Term, TurtleError> {
        if !is_valid_qname(name) {
            return Err(TurtleError::Syntax {
                line: self.line,
                column: self.column,
                message: format!("invalid qualified name '{name}'"),
            });
        }
        let prefix = name.split_once(':').map(|(p, _)| p).unwrap_or("");
        if !self.namespaces.contains(prefix) {
            return Err(TurtleError::UnknownPrefix {
                line: self.line,
                column: self.column,
                prefix: prefix.to_string(),
            });
        }
        Ok(Term::iri(name))
    }

    fn run(&mut self) -> Result<(), TurtleError> {
        loop {
            let Some(token) = self.next_token()? else {
                return Ok(());
            };
            match token {
                Token::PrefixKeyword => self.parse_prefix_declaration()?,
                Token::QName(name) => {
                    let subject = self.qname_term(&name)?;
                    self.parse_predicate_object_list(subject)?;
                }
                other => {
                    return self.error(format!("expected subject or @prefix, found {other:?}"))
                }
            }
        }
    }

    fn parse_prefix_declaration(&mut self) -> Result<(), TurtleError> {
        // Shape: @prefix w: <iri> .
        self.skip_trivia();
        let prefix = self.take_name_chars();
        if !is_valid_prefix(&prefix) {
            return self.error(format!("invalid prefix name '{prefix}'"));
        }
        if self.bump() != Some(':') {
            return self.error("expected ':' after prefix name");
        }
        match self.next_token()? {
            Some(Token::IriRef(base)) => {
                self.namespaces.declare(prefix, base);
                self.expect_dot()
            }
            other => self.error(format!("expected <iri>, found {other:?}")),
        }
    }

    fn parse_predicate_object_list(&mut self, subject: Term) -> Result<(), TurtleError> {
        loop {
            let predicate = match self.next_token()? {
                Some(Token::QName(name)) => self.qname_term(&name)?,
                Some(Token::A) => Term::iri(RDF_TYPE),
                other => return self.error(format!("expected predicate, found {other:?}")),
            };
            loop {
                let object = match self.next_token()? {
                    Some(Token::QName(name)) => self.qname_term(&name)?,
                    Some(Token::Literal(value)) => Term::literal(value),
                    other => return self.error(format!("expected object, found {other:?}")),
                };
                let triple = Triple::new(subject.clone(), predicate.clone(), object);
                self.store.insert(triple).map_err(|e| TurtleError::Syntax {
                    line: self.line,
                    column: self.column,
                    message: e.to_string(),
                })?;
                match self.next_token()? {
                    Some(Token::Comma) => continue,
                    Some(Token::Semicolon) => break,
                    Some(Token::Dot) => return Ok(()),
                    other => {
                        return self.error(format!("expected ',', ';' or '.', found {other:?}"))
                    }
                }
            }
        }
    }
}
