//! Parser for the bracketed forward-chaining rule syntax.
//!
//! ```text
//! # comment to end of line
//! [electSymm: (?a w:connects ?b) -> (?b w:connects ?a)]
//! [byJ: (?a w:connects ?j), (?j w:connects ?c),
//!       (?j rdf:type w:JUNCTION), notEqual(?a, ?c)
//!       -> (?a w:connects ?c)]
//! ```
//!
//! Terms are variables (`?a`), qualified names (`w:connects`), or bare
//! tokens (`a_1`) which denote string literals. Whitespace and newlines are
//! insignificant outside tokens.

use crate::triple::{is_valid_qname, Term};

use super::ast::{BodyAtom, Guard, Rule, RuleError, RuleSet, TriplePattern};

/// Parses a rule file into a [`RuleSet`].
pub fn parse_rules(text: &str) -> Result<RuleSet, RuleError> {
    parse_rules_named(text, None)
}

/// Like [`parse_rules`], recording `source` as each rule's provenance.
pub fn parse_rules_named(text: &str, source: Option<&str>) -> Result<RuleSet, RuleError> {
    let mut cursor = Cursor::new(text);
    let mut set = RuleSet::empty();
    loop {
        cursor.skip_trivia();
        match cursor.peek() {
            None => return Ok(set),
            Some('[') => {
                let rule = parse_rule(&mut cursor, source)?;
                set.push(rule)?;
            }
            Some(other) => {
                return cursor.error(format!("expected '[' to start a rule, found '{other}'"))
            }
        }
    }
}

fn parse_rule(cursor: &mut Cursor, source: Option<&str>) -> Result<Rule, RuleError> {
    cursor.expect('[')?;
    cursor.skip_trivia();
    let name = cursor.take_ident();
    if name.is_empty() {
        return cursor.error("expected rule name after '['");
    }
    cursor.skip_trivia();
    cursor.expect(':')?;

    let mut body = Vec::new();
    loop {
        body.push(parse_body_atom(cursor)?);
        cursor.skip_trivia();
        match cursor.peek() {
            Some(',') => {
                cursor.bump();
            }
            Some('-') => break,
            Some(other) => {
                return cursor.error(format!("expected ',' or '->' after body atom, found '{other}'"))
            }
            None => return cursor.error("unexpected end of input in rule body"),
        }
    }
    cursor.expect('-')?;
    cursor.expect('>')?;

    let mut head = Vec::new();
    loop {
        cursor.skip_trivia();
        head.push(parse_pattern(cursor)?);
        cursor.skip_trivia();
        match cursor.peek() {
            Some(',') => {
                cursor.bump();
            }
            Some(']') => {
                cursor.bump();
                break;
            }
            Some(other) => {
                return cursor.error(format!("expected ',' or ']' after head pattern, found '{other}'"))
            }
            None => return cursor.error("unexpected end of input in rule head"),
        }
    }

    Ok(Rule {
        name,
        body,
        head,
        source: source.map(str::to_string),
    })
}

fn parse_body_atom(cursor: &mut Cursor) -> Result<BodyAtom, RuleError> {
    cursor.skip_trivia();
    match cursor.peek() {
        Some('(') => Ok(BodyAtom::Pattern(parse_pattern(cursor)?)),
        Some(c) if is_ident_char(c) => {
            let word = cursor.take_ident();
            if word != "notEqual" {
                return cursor.error(format!("unknown builtin '{word}' (only notEqual is supported)"));
            }
            cursor.skip_trivia();
            cursor.expect('(')?;
            let a = parse_guard_variable(cursor)?;
            cursor.skip_trivia();
            cursor.expect(',')?;
            let b = parse_guard_variable(cursor)?;
            cursor.skip_trivia();
            cursor.expect(')')?;
            Ok(BodyAtom::Guard(Guard::NotEqual(a, b)))
        }
        Some(other) => cursor.error(format!("expected a pattern or notEqual(...), found '{other}'")),
        None => cursor.error("unexpected end of input in rule body"),
    }
}

fn parse_guard_variable(cursor: &mut Cursor) -> Result<crate::triple::Atom, RuleError> {
    cursor.skip_trivia();
    match parse_term(cursor)? {
        Term::Variable(name) => Ok(name),
        other => cursor.error(format!("notEqual arguments must be variables, found '{other}'")),
    }
}

fn parse_pattern(cursor: &mut Cursor) -> Result<TriplePattern, RuleError> {
    cursor.skip_trivia();
    cursor.expect('(')?;
    let subject = parse_term(cursor)?;
    let predicate = parse_term(cursor)?;
    let object = parse_term(cursor)?;
    cursor.skip_trivia();
    cursor.expect(')')?;
    Ok(TriplePattern::new(subject, predicate, object))
}

fn parse_term(cursor: &mut Cursor) -> Result<Term, RuleError> {
    cursor.skip_trivia();
    match cursor.peek() {
        Some('?') => {
            cursor.bump();
            let name = cursor.take_ident();
            if name.is_empty() {
                return cursor.error("expected variable name after '?'");
            }
            Ok(Term::variable(name))
        }
        Some(c) if is_ident_char(c) => {
            let first = cursor.take_ident();
            if cursor.peek() == Some(':') {
                cursor.bump();
                let local = cursor.take_ident();
                let qname = format!("{first}:{local}");
                if !is_valid_qname(&qname) {
                    return cursor.error(format!("invalid qualified name '{qname}'"));
                }
                Ok(Term::iri(qname))
            } else {
                // Bare token: a plain string literal such as `a_1`.
                Ok(Term::literal(first))
            }
        }
        Some(other) => cursor.error(format!("expected a term, found '{other}'")),
        None => cursor.error("unexpected end of input in pattern"),
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Cursor {
    fn new(text: &str) -> Cursor {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, RuleError> {
        Err(RuleError::Syntax {
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

    fn expect(&mut self, expected: char) -> Result<(), RuleError> {
        self.skip_trivia_except(expected)?;
        match self.peek() {
            Some(c) if c == expected => {
                self.bump();
                Ok(())
            }
            Some(other) => self.error(format!("expected '{expected}', found '{other}'")),
            None => self.error(format!("expected '{expected}', found end of input")),
        }
    }

    fn skip_trivia_except(&mut self, expected: char) -> Result<(), RuleError> {
        // '>' directly follows '-' in the arrow; no trivia allowed between.
        if expected != '>' {
            self.skip_trivia();
        }
        Ok(())
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

    fn take_ident(&mut self) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if is_ident_char(c) {
                out.push(c);
                self.bump();
            } else {
                break;
            }
        }
        out
    }
}
