use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Rejected term or triple construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("IRI must be non-empty")]
    EmptyIri,
    #[error("IRI {0:?} contains whitespace or angle brackets")]
    InvalidIriChar(String),
    #[error("invalid variable name {0:?}")]
    InvalidVariable(String),
    #[error("{position} must be an IRI, found {found}")]
    NotAnIri { position: &'static str, found: String },
}

/// One RDF term. Variables only ever appear inside request patterns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Iri(String),
    Literal(String),
    Variable(String),
}

impl Term {
    pub fn iri(value: impl Into<String>) -> Result<Self, TermError> {
        let value = value.into();
        validate_iri(&value)?;
        Ok(Term::Iri(value))
    }

    pub fn literal(value: impl Into<String>) -> Self {
        Term::Literal(value.into())
    }

    pub fn variable(name: impl Into<String>) -> Result<Self, TermError> {
        let name = name.into();
        if !is_variable_name(&name) {
            return Err(TermError::InvalidVariable(name));
        }
        Ok(Term::Variable(name))
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri(_))
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }

    /// IRI string, literal lexical form, or variable name without the sigil.
    pub fn value(&self) -> &str {
        match self {
            Term::Iri(v) | Term::Literal(v) | Term::Variable(v) => v,
        }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            Term::Iri(_) => "IRI",
            Term::Literal(_) => "literal",
            Term::Variable(_) => "variable",
        }
    }

    /// Bytes of the serialized form, without allocating.
    fn serialized_bytes(&self) -> impl Iterator<Item = u8> + '_ {
        let (open, body, close): (u8, Box<dyn Iterator<Item = u8> + '_>, Option<u8>) = match self {
            Term::Iri(v) => (b'<', Box::new(v.bytes()), Some(b'>')),
            Term::Literal(v) => (b'"', Box::new(v.bytes().flat_map(escape_byte)), Some(b'"')),
            Term::Variable(v) => (b'?', Box::new(v.bytes()), None),
        };
        std::iter::once(open).chain(body).chain(close)
    }
}

fn escape_byte(b: u8) -> impl Iterator<Item = u8> {
    let (buf, len) = match b {
        b'"' => (*b"\\\"", 2),
        b'\\' => (*b"\\\\", 2),
        b'\n' => (*b"\\n", 2),
        b'\r' => (*b"\\r", 2),
        other => ([other, 0], 1),
    };
    buf.into_iter().take(len)
}

pub(crate) fn validate_iri(value: &str) -> Result<(), TermError> {
    if value.is_empty() {
        return Err(TermError::EmptyIri);
    }
    if value.chars().any(|c| c.is_whitespace() || c == '<' || c == '>') {
        return Err(TermError::InvalidIriChar(value.to_string()));
    }
    Ok(())
}

pub(crate) fn is_variable_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Terms order by their serialized form, byte-wise.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.serialized_bytes().cmp(other.serialized_bytes())
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(v) => write!(f, "<{v}>"),
            Term::Variable(v) => write!(f, "?{v}"),
            Term::Literal(v) => {
                f.write_str("\"")?;
                for c in v.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        '\r' => f.write_str("\\r")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
        }
    }
}

/// A subject/predicate/object statement. Subject and predicate are always IRIs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    subject: Term,
    predicate: Term,
    object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Self, TermError> {
        for (position, term) in [("subject", &subject), ("predicate", &predicate)] {
            if !term.is_iri() {
                return Err(TermError::NotAnIri {
                    position,
                    found: term.kind_name().to_string(),
                });
            }
        }
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Term {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn is_ground(&self) -> bool {
        !self.object.is_variable()
    }

    /// Replaces a bound variable object with its value; unbound variables stay.
    pub fn substitute(&self, binding: &Binding) -> Triple {
        let object = match &self.object {
            Term::Variable(name) => binding.get(name).cloned().unwrap_or_else(|| self.object.clone()),
            other => other.clone(),
        };
        Triple {
            subject: self.subject.clone(),
            predicate: self.predicate.clone(),
            object,
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// Deduplicated triples in canonical (subject, predicate, object) order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TripleSet {
    triples: BTreeSet<Triple>,
}

impl TripleSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false when the triple was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn extend(&mut self, other: &TripleSet) {
        self.triples.extend(other.iter().cloned());
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> + '_ {
        self.triples.iter()
    }

    /// True iff no triple carries a variable.
    pub fn is_ground(&self) -> bool {
        self.triples.iter().all(Triple::is_ground)
    }

    /// Variable names in ascending order.
    pub fn variables(&self) -> BTreeSet<String> {
        self.triples
            .iter()
            .filter_map(|t| match t.object() {
                Term::Variable(name) => Some(name.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn substitute(&self, binding: &Binding) -> TripleSet {
        self.triples.iter().map(|t| t.substitute(binding)).collect()
    }

    pub fn is_subset(&self, other: &TripleSet) -> bool {
        self.triples.is_subset(&other.triples)
    }

    /// Canonical single-line strings, one per triple.
    pub fn to_lines(&self) -> Vec<String> {
        self.triples.iter().map(Triple::to_string).collect()
    }
}

impl FromIterator<Triple> for TripleSet {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        TripleSet {
            triples: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a TripleSet {
    type Item = &'a Triple;
    type IntoIter = std::collections::btree_set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

/// Mapping from variable names to ground terms.
///
/// Bindings over the same variables compare lexicographically by their values
/// taken in variable-name order, which is the tie-break used by matching.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binding(BTreeMap<String, Term>);

impl Binding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.0.get(var)
    }

    pub fn insert(&mut self, var: impl Into<String>, term: Term) -> Option<Term> {
        self.0.insert(var.into(), term)
    }

    pub fn remove(&mut self, var: &str) -> Option<Term> {
        self.0.remove(var)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Term)> + '_ {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }
}

impl FromIterator<(String, Term)> for Binding {
    fn from_iter<I: IntoIterator<Item = (String, Term)>>(iter: I) -> Self {
        Binding(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_order_follows_serialized_form() {
        let a = Term::iri("a").unwrap();
        let ab = Term::iri("ab").unwrap();
        assert!(a < ab);
        assert_eq!(a.cmp(&ab), a.to_string().cmp(&ab.to_string()));
        let lit = Term::literal("zz");
        let var = Term::variable("a").unwrap();
        assert!(lit < a, "'\"' sorts before '<'");
        assert!(a < var, "'<' sorts before '?'");
        let quoted = Term::literal("a\"b");
        let plain = Term::literal("a#b");
        assert_eq!(quoted.cmp(&plain), quoted.to_string().cmp(&plain.to_string()));
    }

    #[test]
    fn iri_validation() {
        assert_eq!(Term::iri(""), Err(TermError::EmptyIri));
        assert!(Term::iri("a b").is_err());
        assert!(Term::iri("a<b").is_err());
        assert!(Term::iri("u:p1").is_ok());
    }

    #[test]
    fn variable_names() {
        assert!(Term::variable("x").is_ok());
        assert!(Term::variable("x_1").is_ok());
        assert!(Term::variable("1x").is_err());
        assert!(Term::variable("").is_err());
        assert!(Term::variable("x-y").is_err());
    }

    #[test]
    fn subject_must_be_iri() {
        let err = Triple::new(Term::literal("s"), Term::iri("p").unwrap(), Term::literal("o"));
        assert!(matches!(err, Err(TermError::NotAnIri { position: "subject", .. })));
        let err = Triple::new(
            Term::iri("s").unwrap(),
            Term::variable("p").unwrap(),
            Term::literal("o"),
        );
        assert!(matches!(err, Err(TermError::NotAnIri { position: "predicate", .. })));
    }

    #[test]
    fn literal_escapes() {
        let t = Term::literal("say \"hi\"\\\nnow\r");
        assert_eq!(t.to_string(), r#""say \"hi\"\\\nnow\r""#);
    }

    #[test]
    fn is_ground_cases() {
        let s = Term::iri("u:p1").unwrap();
        let p = Term::iri("u:hasAppointment").unwrap();
        let ground: TripleSet = [Triple::new(s.clone(), p.clone(), Term::literal("tuesday")).unwrap()]
            .into_iter()
            .collect();
        assert!(ground.is_ground());
        assert!(TripleSet::new().is_ground());
        let open: TripleSet = [Triple::new(s, p, Term::variable("x").unwrap()).unwrap()]
            .into_iter()
            .collect();
        assert!(!open.is_ground());
    }
}
