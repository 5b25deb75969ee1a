//! S-expression reader for KiCad schematic files.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SexprError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("no expression in input")]
    Empty,
}

/// An atom (bare token), quoted string, or list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SExpr {
    Atom(String),
    Str(String),
    List(Vec<SExpr>),
}

impl SExpr {
    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            SExpr::Str(s) => Some(s),
            _ => None,
        }
    }

    /// Atom or string content, for positions where KiCad emits either.
    pub fn as_text(&self) -> Option<&str> {
        match self {
            SExpr::Atom(s) | SExpr::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(items) => Some(items),
            _ => None,
        }
    }

    /// The leading atom of a list, its "tag".
    pub fn tag(&self) -> Option<&str> {
        self.as_list()?.first()?.as_atom()
    }

    /// Child lists with the given tag.
    pub fn children<'a>(&'a self, tag: &'a str) -> impl Iterator<Item = &'a SExpr> + 'a {
        self.as_list()
            .unwrap_or(&[])
            .iter()
            .filter(move |e| e.tag() == Some(tag))
    }

    /// First child list with the given tag.
    pub fn child<'a>(&'a self, tag: &'a str) -> Option<&'a SExpr> {
        self.children(tag).next()
    }

    /// All positional (non-list) arguments after the tag.
    pub fn args(&self) -> &[SExpr] {
        match self.as_list() {
            Some([_, rest @ ..]) => rest,
            _ => &[],
        }
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Atom(s) => f.write_str(s),
            SExpr::Str(s) => write!(f, "\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\"")),
            SExpr::List(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Parses one s-expression; trailing content after the root expression is
/// an error, as is an empty input.
pub fn parse_sexpr(text: &str) -> Result<SExpr, SexprError> {
    let mut cursor = Cursor::new(text);
    cursor.skip_whitespace();
    if cursor.peek().is_none() {
        return Err(SexprError::Empty);
    }
    let expr = cursor.parse_expr()?;
    cursor.skip_whitespace();
    if let Some(c) = cursor.peek() {
        return cursor.error(format!("trailing content after expression: '{c}'"));
    }
    Ok(expr)
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

    fn error<T>(&self, message: impl Into<String>) -> Result<T, SexprError> {
        Err(SexprError::Syntax {
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

    fn skip_whitespace(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn parse_expr(&mut self) -> Result<SExpr, SexprError> {
        self.skip_whitespace();
        match self.peek() {
            Some('(') => {
                let (open_line, open_column) = (self.line, self.column);
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_whitespace();
                    match self.peek() {
                        Some(')') => {
                            self.bump();
                            return Ok(SExpr::List(items));
                        }
                        Some(_) => items.push(self.parse_expr()?),
                        None => {
                            return Err(SexprError::Syntax {
                                line: open_line,
                                column: open_column,
                                message: "unbalanced '(' — missing closing paren".into(),
                            })
                        }
                    }
                }
            }
            Some(')') => self.error("stray closing paren"),
            Some('"') => {
                self.bump();
                let mut value = String::new();
                loop {
                    match self.bump() {
                        None => return self.error("unterminated string"),
                        Some('"') => return Ok(SExpr::Str(value)),
                        Some('\\') => match self.bump() {
                            Some('"') => value.push('"'),
                            Some('\\') => value.push('\\'),
                            Some('n') => value.push('\n'),
                            Some(other) => {
                                value.push('\\');
                                value.push(other);
                            }
                            None => return self.error("unterminated escape"),
                        },
                        Some(other) => value.push(other),
                    }
                }
            }
            Some(_) => {
                let mut token = String::new();
                while let Some(c) = self.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == '"' {
                        break;
                    }
                    token.push(c);
                    self.bump();
                }
                Ok(SExpr::Atom(token))
            }
            None => self.error("unexpected end of input"),
        }
    }
}
