//! The dialogue model: a static speech part (predefined moves) and a dynamic
//! state part (agendas held in a workspace).

mod snapshot;
mod speech;
mod workspace;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rdf::TripleSet;

pub use snapshot::{load_snapshot, save_snapshot, AgendaRecord, WorkspaceSnapshot, SNAPSHOT_FORMAT};
pub use speech::{LegacyAgendaDef, SpeechPart};
pub use workspace::{WorkSpace, ACK_ID, GREET_ID, THANK_ID};

pub type Turn = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OntologyError {
    #[error("invalid snippet: {0}")]
    InvalidSnippet(String),
    #[error("invalid agenda: {0}")]
    InvalidAgenda(String),
    #[error("unknown agenda {0:?}")]
    UnknownAgenda(String),
    #[error("general agenda {0:?} cannot be removed")]
    GeneralAgendaImmutable(String),
    #[error("agenda id {0:?} already in use")]
    DuplicateAgendaId(String),
    #[error("current turn {current} precedes insertion turn {inserted}")]
    TurnUnderflow { inserted: Turn, current: Turn },
    #[error("bad snapshot: {0}")]
    Snapshot(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DialogueActionType {
    Inform,
    Request,
    Greet,
    Acknowledge,
    Thank,
}

impl DialogueActionType {
    pub const ALL: [DialogueActionType; 5] = [
        DialogueActionType::Inform,
        DialogueActionType::Request,
        DialogueActionType::Greet,
        DialogueActionType::Acknowledge,
        DialogueActionType::Thank,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DialogueActionType::Inform => "inform",
            DialogueActionType::Request => "request",
            DialogueActionType::Greet => "greet",
            DialogueActionType::Acknowledge => "acknowledge",
            DialogueActionType::Thank => "thank",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.as_str() == name)
    }

    /// Greet, acknowledge and thank need no semantics and exist in every domain.
    pub fn is_general(self) -> bool {
        !matches!(self, DialogueActionType::Inform | DialogueActionType::Request)
    }
}

impl fmt::Display for DialogueActionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Marker {
    Informable,
    Requestable,
}

impl Marker {
    pub fn as_str(self) -> &'static str {
        match self {
            Marker::Informable => "informable",
            Marker::Requestable => "requestable",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "informable" => Some(Marker::Informable),
            "requestable" => Some(Marker::Requestable),
            _ => None,
        }
    }

    /// The dialogue action an agenda built from this marker carries.
    pub fn action(self) -> DialogueActionType {
        match self {
            Marker::Informable => DialogueActionType::Inform,
            Marker::Requestable => DialogueActionType::Request,
        }
    }
}

/// A piece of contextual knowledge pushed by the knowledge-integration module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InformationSnippet {
    snippet_id: String,
    marker: Marker,
    semantics: TripleSet,
}

impl InformationSnippet {
    pub fn new(
        snippet_id: impl Into<String>,
        marker: Marker,
        semantics: TripleSet,
    ) -> Result<Self, OntologyError> {
        let snippet_id = snippet_id.into();
        if semantics.is_empty() {
            return Err(OntologyError::InvalidSnippet(format!(
                "snippet {snippet_id:?} has no semantics"
            )));
        }
        match marker {
            Marker::Informable if !semantics.is_ground() => {
                return Err(OntologyError::InvalidSnippet(format!(
                    "informable snippet {snippet_id:?} contains variables"
                )));
            }
            Marker::Requestable if semantics.is_ground() => {
                return Err(OntologyError::InvalidSnippet(format!(
                    "requestable snippet {snippet_id:?} has no variable"
                )));
            }
            _ => {}
        }
        Ok(InformationSnippet {
            snippet_id,
            marker,
            semantics,
        })
    }

    pub fn snippet_id(&self) -> &str {
        &self.snippet_id
    }

    pub fn marker(&self) -> Marker {
        self.marker
    }

    pub fn semantics(&self) -> &TripleSet {
        &self.semantics
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AgendaKind {
    Dynamic,
    General,
    Legacy,
}

/// A predefined system prompt.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UtteranceMove {
    pub id: String,
    pub utterance: String,
}

/// A predefined user-input grammar. The pattern is kept as an opaque string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrammarMove {
    pub id: String,
    pub pattern: String,
}

/// One candidate system action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agenda {
    agenda_id: String,
    kind: AgendaKind,
    action: Option<DialogueActionType>,
    semantics: TripleSet,
    inserted_turn: Turn,
    utterance_move: Option<UtteranceMove>,
    grammar_moves: Vec<GrammarMove>,
    source_snippet: Option<String>,
}

impl Agenda {
    pub(crate) fn general(agenda_id: &str, action: DialogueActionType) -> Self {
        debug_assert!(action.is_general());
        Agenda {
            agenda_id: agenda_id.to_string(),
            kind: AgendaKind::General,
            action: Some(action),
            semantics: TripleSet::new(),
            inserted_turn: 0,
            utterance_move: None,
            grammar_moves: Vec::new(),
            source_snippet: None,
        }
    }

    pub(crate) fn dynamic(agenda_id: String, snippet: &InformationSnippet, inserted_turn: Turn) -> Self {
        Agenda {
            agenda_id,
            kind: AgendaKind::Dynamic,
            action: Some(snippet.marker().action()),
            semantics: snippet.semantics().clone(),
            inserted_turn,
            utterance_move: None,
            grammar_moves: Vec::new(),
            source_snippet: Some(snippet.snippet_id().to_string()),
        }
    }

    /// A move-based agenda with zero or one utterance move and at least one
    /// grammar move.
    pub fn legacy(
        agenda_id: impl Into<String>,
        utterance_move: Option<UtteranceMove>,
        grammar_moves: Vec<GrammarMove>,
    ) -> Result<Self, OntologyError> {
        let agenda = Agenda {
            agenda_id: agenda_id.into(),
            kind: AgendaKind::Legacy,
            action: None,
            semantics: TripleSet::new(),
            inserted_turn: 0,
            utterance_move,
            grammar_moves,
            source_snippet: None,
        };
        agenda.validate()?;
        Ok(agenda)
    }

    pub(crate) fn validate(&self) -> Result<(), OntologyError> {
        let fail = |why: &str| Err(OntologyError::InvalidAgenda(format!("{}: {why}", self.agenda_id)));
        if self.agenda_id.is_empty() {
            return fail("empty id");
        }
        match self.kind {
            AgendaKind::Dynamic => {
                if !matches!(self.action, Some(a) if !a.is_general()) {
                    return fail("dynamic agenda must inform or request");
                }
                if self.utterance_move.is_some() || !self.grammar_moves.is_empty() {
                    return fail("dynamic agenda cannot carry moves");
                }
                if self.semantics.is_empty() {
                    return fail("dynamic agenda needs semantics");
                }
            }
            AgendaKind::General => {
                if !matches!(self.action, Some(a) if a.is_general()) {
                    return fail("general agenda must greet, acknowledge or thank");
                }
                if !self.semantics.is_empty() {
                    return fail("general agenda carries no semantics");
                }
                if self.utterance_move.is_some() || !self.grammar_moves.is_empty() {
                    return fail("general agenda cannot carry moves");
                }
            }
            AgendaKind::Legacy => {
                if self.action.is_some() {
                    return fail("legacy agenda has no dialogue action");
                }
                if self.grammar_moves.is_empty() {
                    return fail("legacy agenda needs at least one grammar move");
                }
                if !self.semantics.is_empty() {
                    return fail("legacy agenda carries no semantics");
                }
                if let Some(m) = &self.utterance_move {
                    if m.utterance.is_empty() {
                        return fail("empty utterance");
                    }
                }
                if self.grammar_moves.iter().any(|g| g.pattern.is_empty()) {
                    return fail("empty grammar pattern");
                }
            }
        }
        match self.action {
            Some(DialogueActionType::Inform) if !self.semantics.is_ground() => {
                fail("inform semantics must be ground")
            }
            Some(DialogueActionType::Request) if self.semantics.is_ground() => {
                fail("request semantics need a variable")
            }
            _ => Ok(()),
        }
    }

    pub fn agenda_id(&self) -> &str {
        &self.agenda_id
    }

    pub fn kind(&self) -> AgendaKind {
        self.kind
    }

    /// Absent only for legacy agendas.
    pub fn action(&self) -> Option<DialogueActionType> {
        self.action
    }

    pub fn semantics(&self) -> &TripleSet {
        &self.semantics
    }

    /// The age: the turn at which the agenda entered the workspace.
    pub fn inserted_turn(&self) -> Turn {
        self.inserted_turn
    }

    pub fn utterance_move(&self) -> Option<&UtteranceMove> {
        self.utterance_move.as_ref()
    }

    pub fn grammar_moves(&self) -> &[GrammarMove] {
        &self.grammar_moves
    }

    pub fn source_snippet(&self) -> Option<&str> {
        self.source_snippet.as_deref()
    }

    /// Turns elapsed since insertion.
    pub fn staleness(&self, current_turn: Turn) -> Result<Turn, OntologyError> {
        current_turn
            .checked_sub(self.inserted_turn)
            .ok_or(OntologyError::TurnUnderflow {
                inserted: self.inserted_turn,
                current: current_turn,
            })
    }

    /// Ordering used wherever agendas compete: oldest first, then by id.
    pub fn age_order(&self, other: &Agenda) -> Ordering {
        self.inserted_turn
            .cmp(&other.inserted_turn)
            .then_with(|| compare_agenda_ids(&self.agenda_id, &other.agenda_id))
    }
}

/// Parses the serial out of a generated id (`a<serial>`).
pub fn generated_serial(id: &str) -> Option<u64> {
    let digits = id.strip_prefix('a')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

/// Generated ids compare by serial so that `a9` precedes `a10`; other ids sort
/// before them, by string.
pub fn compare_agenda_ids(a: &str, b: &str) -> Ordering {
    match (generated_serial(a), generated_serial(b)) {
        (Some(x), Some(y)) => x.cmp(&y),
        (Some(_), None) => Ordering::Greater,
        (None, Some(_)) => Ordering::Less,
        (None, None) => a.cmp(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::parse_document;

    #[test]
    fn snippet_invariants() {
        let ground = parse_document("<u:p1> <u:hasAppointment> \"tuesday\" .").unwrap();
        let open = parse_document("<u:p1> <u:hasPainLevel> ?x .").unwrap();
        assert!(InformationSnippet::new("s1", Marker::Informable, ground.clone()).is_ok());
        assert!(InformationSnippet::new("s2", Marker::Requestable, open.clone()).is_ok());
        assert!(matches!(
            InformationSnippet::new("s3", Marker::Informable, open),
            Err(OntologyError::InvalidSnippet(_))
        ));
        assert!(matches!(
            InformationSnippet::new("s4", Marker::Requestable, ground),
            Err(OntologyError::InvalidSnippet(_))
        ));
        assert!(matches!(
            InformationSnippet::new("s5", Marker::Informable, TripleSet::new()),
            Err(OntologyError::InvalidSnippet(_))
        ));
    }

    #[test]
    fn staleness_arithmetic() {
        let snippet = InformationSnippet::new(
            "s",
            Marker::Informable,
            parse_document("<a> <b> <c> .").unwrap(),
        )
        .unwrap();
        let agenda = Agenda::dynamic("a1".into(), &snippet, 2);
        assert_eq!(agenda.staleness(5), Ok(3));
        assert_eq!(agenda.staleness(2), Ok(0));
        let agenda = Agenda::dynamic("a2".into(), &snippet, 5);
        assert_eq!(
            agenda.staleness(2),
            Err(OntologyError::TurnUnderflow { inserted: 5, current: 2 })
        );
    }

    #[test]
    fn legacy_agenda_shape() {
        let gm = GrammarMove {
            id: "g1".into(),
            pattern: "yes | no".into(),
        };
        assert!(Agenda::legacy("confirm", None, vec![gm.clone()]).is_ok());
        let um = UtteranceMove {
            id: "u1".into(),
            utterance: "Shall I continue?".into(),
        };
        let agenda = Agenda::legacy("confirm", Some(um), vec![gm]).unwrap();
        assert_eq!(agenda.action(), None);
        assert!(matches!(
            Agenda::legacy("broken", None, vec![]),
            Err(OntologyError::InvalidAgenda(_))
        ));
    }

    #[test]
    fn id_ordering() {
        assert_eq!(compare_agenda_ids("a4", "a7"), Ordering::Less);
        assert_eq!(compare_agenda_ids("a9", "a10"), Ordering::Less);
        assert_eq!(compare_agenda_ids("g_ack", "a1"), Ordering::Less);
        assert_eq!(compare_agenda_ids("g_ack", "g_greet"), Ordering::Less);
        assert_eq!(generated_serial("a"), None);
        assert_eq!(generated_serial("a1x"), None);
        assert_eq!(generated_serial("a12"), Some(12));
    }

    #[test]
    fn action_names() {
        for a in DialogueActionType::ALL {
            assert_eq!(DialogueActionType::parse(a.as_str()), Some(a));
        }
        assert_eq!(DialogueActionType::parse("bye"), None);
        assert!(DialogueActionType::Greet.is_general());
        assert!(!DialogueActionType::Request.is_general());
    }
}
