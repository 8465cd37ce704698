//! Triple data model, the line syntax, and triple-pattern matching.

mod matching;
mod syntax;
mod term;

pub use matching::{match_all, match_pattern, MatchError};
pub use syntax::{parse_document, parse_triple, serialize, ParseError};
pub use term::{Binding, Term, TermError, Triple, TripleSet};
