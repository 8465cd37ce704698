//! The JSON documents exchanged with the external modules.
//!
//! Encoding is fixed: keys in declaration order, two-space indentation, UTF-8,
//! LF line endings and one trailing LF. Triples travel as single-line strings
//! in the triple line syntax.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::ontology::{
    AgendaKind, DialogueActionType, InformationSnippet, Marker, OntologyError, Turn, WorkSpace,
};
use crate::presenter::{Phase, SelectedAction, TurnRecord, UserAction, UserInput};
use crate::rdf::{parse_triple, TripleSet};

use super::ServiceError;

/// The selected system action, handed to language generation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgendaDocument {
    pub session_id: String,
    pub turn: Turn,
    pub agenda_id: String,
    pub dialogue_action: DialogueActionType,
    pub semantics: Vec<String>,
    pub closed: bool,
}

/// Semantic user input produced by language analysis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserInputDocument {
    pub session_id: String,
    pub dialogue_action: UserAction,
    pub semantics: Vec<String>,
}

/// Contextual knowledge pushed by knowledge integration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnippetDocument {
    pub session_id: String,
    pub snippet_id: String,
    pub marker: Marker,
    pub semantics: Vec<String>,
}

/// Read-only view of a session workspace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceDocument {
    pub session_id: String,
    pub turn: Turn,
    pub phase: Phase,
    pub agendas: Vec<WorkspaceEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceEntry {
    pub agenda_id: String,
    pub kind: AgendaKind,
    pub dialogue_action: Option<DialogueActionType>,
    pub semantics: Vec<String>,
    pub inserted_turn: Turn,
    pub staleness: Turn,
    pub source_snippet: Option<String>,
}

/// Canonical text form of any wire document.
pub fn encode<T: Serialize>(doc: &T) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("wire documents always serialize");
    text.push('\n');
    text
}

pub fn decode<T: DeserializeOwned>(text: &str) -> Result<T, ServiceError> {
    serde_json::from_str(text).map_err(|e| ServiceError::MalformedDocument {
        reason: e.to_string(),
    })
}

/// Parses a list of single-line triples, in any order.
pub fn parse_semantics(lines: &[String]) -> Result<TripleSet, String> {
    let mut set = TripleSet::new();
    for (i, line) in lines.iter().enumerate() {
        let triple = parse_triple(line).map_err(|e| format!("semantics[{i}]: {e}"))?;
        set.insert(triple);
    }
    Ok(set)
}

impl AgendaDocument {
    pub fn new(session_id: &str, turn: Turn, selected: &SelectedAction, closed: bool) -> Self {
        AgendaDocument {
            session_id: session_id.to_string(),
            turn,
            agenda_id: selected.agenda_id.clone(),
            dialogue_action: selected.action,
            semantics: selected.semantics.to_lines(),
            closed,
        }
    }

    /// Rebuilds the document emitted for a recorded turn.
    pub fn from_record(session_id: &str, record: &TurnRecord) -> Self {
        Self::new(session_id, record.turn, &record.selected, record.closed)
    }

    pub fn semantics(&self) -> Result<TripleSet, String> {
        parse_semantics(&self.semantics)
    }
}

impl UserInputDocument {
    pub fn from_input(session_id: &str, input: &UserInput) -> Self {
        UserInputDocument {
            session_id: session_id.to_string(),
            dialogue_action: input.action(),
            semantics: input.semantics().to_lines(),
        }
    }

    pub fn to_input(&self) -> Result<UserInput, ServiceError> {
        let semantics = parse_semantics(&self.semantics)
            .map_err(|reason| ServiceError::MalformedDocument { reason })?;
        UserInput::new(self.dialogue_action, semantics).map_err(ServiceError::from)
    }
}

impl SnippetDocument {
    pub fn from_snippet(session_id: &str, snippet: &InformationSnippet) -> Self {
        SnippetDocument {
            session_id: session_id.to_string(),
            snippet_id: snippet.snippet_id().to_string(),
            marker: snippet.marker(),
            semantics: snippet.semantics().to_lines(),
        }
    }

    pub fn to_snippet(&self) -> Result<InformationSnippet, String> {
        let semantics = parse_semantics(&self.semantics)?;
        InformationSnippet::new(self.snippet_id.clone(), self.marker, semantics).map_err(|e| match e {
            OntologyError::InvalidSnippet(msg) => msg,
            other => other.to_string(),
        })
    }
}

impl WorkspaceDocument {
    pub fn new(session_id: &str, turn: Turn, phase: Phase, ws: &WorkSpace) -> Self {
        WorkspaceDocument {
            session_id: session_id.to_string(),
            turn,
            phase,
            agendas: ws
                .agendas()
                .into_iter()
                .map(|a| WorkspaceEntry {
                    agenda_id: a.agenda_id().to_string(),
                    kind: a.kind(),
                    dialogue_action: a.action(),
                    semantics: a.semantics().to_lines(),
                    inserted_turn: a.inserted_turn(),
                    staleness: a.staleness(turn).unwrap_or(0),
                    source_snippet: a.source_snippet().map(str::to_string),
                })
                .collect(),
        }
    }
}
