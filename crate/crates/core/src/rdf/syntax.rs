//! Line-oriented triple syntax.
//!
//! Each non-blank line that does not start with `#` holds one triple:
//!
//! ```text
//! <iri> <iri> (<iri> | "literal" | ?var) .
//! ```
//!
//! Literals escape `"` and `\` with a backslash; `\n` and `\r` stand for line
//! feed and carriage return so that any string survives a round trip.

use thiserror::Error;

use super::term::{is_variable_name, validate_iri, Term, Triple, TripleSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {reason}")]
pub struct ParseError {
    /// 1-based line number.
    pub line: usize,
    /// 1-based column, counted in characters.
    pub column: usize,
    pub reason: String,
}

/// Parses a whole document. Fails on the first malformed line.
pub fn parse_document(text: &str) -> Result<TripleSet, ParseError> {
    let mut set = TripleSet::new();
    for (idx, line) in text.split('\n').enumerate() {
        let trimmed = line.trim_start();
        if trimmed.trim_end().is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let triple = LineParser::new(line, idx + 1).parse_triple()?;
        set.insert(triple);
    }
    Ok(set)
}

/// Parses exactly one triple from a single line (no LF allowed).
pub fn parse_triple(line: &str) -> Result<Triple, ParseError> {
    if let Some(pos) = line.find('\n') {
        return Err(ParseError {
            line: 1,
            column: line[..pos].chars().count() + 1,
            reason: "line break inside a single triple".into(),
        });
    }
    LineParser::new(line, 1).parse_triple()
}

/// One line per triple, canonical order, each terminated by LF.
pub fn serialize(ts: &TripleSet) -> String {
    let mut out = String::new();
    for triple in ts {
        out.push_str(&triple.to_string());
        out.push('\n');
    }
    out
}

struct LineParser {
    chars: Vec<char>,
    pos: usize,
    line_no: usize,
}

impl LineParser {
    fn new(src: &str, line_no: usize) -> Self {
        LineParser {
            chars: src.chars().collect(),
            pos: 0,
            line_no,
        }
    }

    fn error(&self, column: usize, reason: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line_no,
            column: column + 1,
            reason: reason.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) -> bool {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c == ' ' || c == '\t' || c == '\r') {
            self.pos += 1;
        }
        self.pos > start
    }

    fn parse_triple(mut self) -> Result<Triple, ParseError> {
        self.skip_ws();
        let subject = self.parse_term("subject")?;
        self.require_ws()?;
        let predicate = self.parse_term("predicate")?;
        self.require_ws()?;
        let object = self.parse_term("object")?;
        self.skip_ws();
        match self.peek() {
            Some('.') => self.pos += 1,
            Some(c) => return Err(self.error(self.pos, format!("expected '.', found {c:?}"))),
            None => return Err(self.error(self.pos, "expected '.' at end of triple")),
        }
        self.skip_ws();
        if let Some(c) = self.peek() {
            return Err(self.error(self.pos, format!("unexpected {c:?} after '.'")));
        }
        Triple::new(subject, predicate, object).map_err(|e| self.error(0, e.to_string()))
    }

    fn require_ws(&mut self) -> Result<(), ParseError> {
        if self.skip_ws() {
            Ok(())
        } else {
            Err(self.error(self.pos, "expected whitespace between terms"))
        }
    }

    fn parse_term(&mut self, position: &str) -> Result<Term, ParseError> {
        let start = self.pos;
        match self.peek() {
            Some('<') => self.parse_iri(),
            Some('"') if position == "object" => self.parse_literal(),
            Some('?') if position == "object" => self.parse_variable(),
            Some('"') | Some('?') => Err(self.error(start, format!("{position} must be an IRI"))),
            Some(c) => Err(self.error(start, format!("unexpected {c:?} at start of {position}"))),
            None => Err(self.error(start, format!("missing {position}"))),
        }
    }

    fn parse_iri(&mut self) -> Result<Term, ParseError> {
        let start = self.pos;
        self.pos += 1;
        let mut value = String::new();
        loop {
            match self.peek() {
                Some('>') => {
                    self.pos += 1;
                    break;
                }
                Some(c) if c == '<' || c.is_whitespace() => {
                    return Err(self.error(self.pos, format!("invalid character {c:?} in IRI")));
                }
                Some(c) => {
                    value.push(c);
                    self.pos += 1;
                }
                None => return Err(self.error(start, "unterminated IRI")),
            }
        }
        validate_iri(&value).map_err(|e| self.error(start, e.to_string()))?;
        Ok(Term::Iri(value))
    }

    fn parse_literal(&mut self) -> Result<Term, ParseError> {
        let start = self.pos;
        self.pos += 1;
        let mut value = String::new();
        loop {
            match self.peek() {
                Some('"') => {
                    self.pos += 1;
                    return Ok(Term::Literal(value));
                }
                Some('\\') => {
                    let esc_at = self.pos;
                    self.pos += 1;
                    let unescaped = match self.peek() {
                        Some('"') => '"',
                        Some('\\') => '\\',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some(c) => return Err(self.error(esc_at, format!("unknown escape \\{c}"))),
                        None => return Err(self.error(esc_at, "dangling backslash")),
                    };
                    value.push(unescaped);
                    self.pos += 1;
                }
                Some(c) => {
                    value.push(c);
                    self.pos += 1;
                }
                None => return Err(self.error(start, "unterminated literal")),
            }
        }
    }

    fn parse_variable(&mut self) -> Result<Term, ParseError> {
        let start = self.pos;
        self.pos += 1;
        let name_start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        let name: String = self.chars[name_start..self.pos].iter().collect();
        if !is_variable_name(&name) {
            return Err(self.error(start, format!("invalid variable name {name:?}")));
        }
        Ok(Term::Variable(name))
    }
}
