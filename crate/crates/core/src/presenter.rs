//! Dialogue control: the per-turn cycle and the agenda selection policy.
//!
//! Each turn applies the user's input to the state, selects one agenda from
//! the workspace, retires consumed agendas and appends a [`TurnRecord`].
//! Selection is a strict priority cascade:
//!
//! 0. the user said goodbye: thank;
//! 1. first turn of the session: greet;
//! 2. an open user request: answer it from the oldest matching inform agenda,
//!    or acknowledge once and drop the request on the following turn;
//! 3. the oldest request agenda, else the oldest inform agenda;
//! 4. acknowledge.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ontology::{DialogueActionType, Turn, WorkSpace, ACK_ID, GREET_ID, THANK_ID};
use crate::rdf::{match_pattern, Binding, TripleSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TurnError {
    #[error("session is closed")]
    SessionClosed,
    #[error("invalid user input: {0}")]
    InvalidUserInput(String),
}

/// The communicative function of a user utterance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UserAction {
    Inform,
    Request,
    Greet,
    Acknowledge,
    Thank,
    Bye,
}

impl UserAction {
    pub fn as_str(self) -> &'static str {
        match self {
            UserAction::Inform => "inform",
            UserAction::Request => "request",
            UserAction::Greet => "greet",
            UserAction::Acknowledge => "acknowledge",
            UserAction::Thank => "thank",
            UserAction::Bye => "bye",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "bye" => Some(UserAction::Bye),
            other => DialogueActionType::parse(other).map(UserAction::from),
        }
    }
}

impl From<DialogueActionType> for UserAction {
    fn from(a: DialogueActionType) -> Self {
        match a {
            DialogueActionType::Inform => UserAction::Inform,
            DialogueActionType::Request => UserAction::Request,
            DialogueActionType::Greet => UserAction::Greet,
            DialogueActionType::Acknowledge => UserAction::Acknowledge,
            DialogueActionType::Thank => UserAction::Thank,
        }
    }
}

impl fmt::Display for UserAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Semantic user input as delivered by language analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UserInput {
    action: UserAction,
    semantics: TripleSet,
}

impl UserInput {
    pub fn new(action: UserAction, semantics: TripleSet) -> Result<Self, TurnError> {
        let invalid = |why: &str| Err(TurnError::InvalidUserInput(format!("{action}: {why}")));
        match action {
            UserAction::Inform if semantics.is_empty() => return invalid("needs semantics"),
            UserAction::Inform if !semantics.is_ground() => return invalid("semantics must be ground"),
            UserAction::Request if semantics.is_ground() => {
                return invalid("semantics need at least one variable")
            }
            UserAction::Greet | UserAction::Acknowledge | UserAction::Thank | UserAction::Bye
                if !semantics.is_empty() =>
            {
                return invalid("carries no semantics")
            }
            _ => {}
        }
        Ok(UserInput { action, semantics })
    }

    /// Input without semantics: greet, acknowledge, thank or bye.
    pub fn bare(action: UserAction) -> Result<Self, TurnError> {
        Self::new(action, TripleSet::new())
    }

    pub fn action(&self) -> UserAction {
        self.action
    }

    pub fn semantics(&self) -> &TripleSet {
        &self.semantics
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Fresh,
    Running,
    Closed,
}

/// A user request waiting to be answered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PendingRequest {
    pub pattern: TripleSet,
    /// Set once the request went unanswered and was acknowledged.
    pub acknowledged: bool,
}

/// The system action chosen for one turn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectedAction {
    pub agenda_id: String,
    pub action: DialogueActionType,
    /// Ground for inform; the pattern for request; empty for general actions.
    pub semantics: TripleSet,
    /// Present when the agenda answered a user request.
    pub binding: Option<Binding>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TurnRecord {
    pub turn: Turn,
    pub user_input: Option<UserInput>,
    pub selected: SelectedAction,
    /// The session closed with this turn.
    pub closed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PendingEffect {
    Keep,
    Clear,
    Acknowledge,
}

/// What [`DialogueState::select_agenda`] decided, before any state change.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    pub selected: SelectedAction,
    pending: PendingEffect,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DialogueState {
    session_id: String,
    turn: Turn,
    phase: Phase,
    workspace: WorkSpace,
    pending_user_request: Option<PendingRequest>,
    closure_pending: bool,
    facts: TripleSet,
    history: Vec<TurnRecord>,
}

impl DialogueState {
    pub fn new(session_id: impl Into<String>, workspace: WorkSpace) -> Self {
        DialogueState {
            session_id: session_id.into(),
            turn: 0,
            phase: Phase::Fresh,
            workspace,
            pending_user_request: None,
            closure_pending: false,
            facts: TripleSet::new(),
            history: Vec::new(),
        }
    }

    pub fn session_id(&self) -> &str {
        &self.session_id
    }

    /// Number of completed system turns.
    pub fn turn(&self) -> Turn {
        self.turn
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn workspace(&self) -> &WorkSpace {
        &self.workspace
    }

    /// Snippet ingestion goes through here; the turn loop owns everything else.
    pub fn workspace_mut(&mut self) -> &mut WorkSpace {
        &mut self.workspace
    }

    pub fn pending_user_request(&self) -> Option<&PendingRequest> {
        self.pending_user_request.as_ref()
    }

    /// Triples the user has provided so far.
    pub fn facts(&self) -> &TripleSet {
        &self.facts
    }

    pub fn history(&self) -> &[TurnRecord] {
        &self.history
    }

    /// Runs one full turn. `input` is `None` when the user said nothing, as on
    /// the system-initiated opening turn.
    pub fn run_turn(&mut self, input: Option<UserInput>) -> Result<SelectedAction, TurnError> {
        if self.phase == Phase::Closed {
            return Err(TurnError::SessionClosed);
        }
        if let Some(input) = &input {
            self.apply_user_input(input);
        }
        self.retire_satisfied_requests();

        let Selection { selected, pending } = self.select_agenda();
        match pending {
            PendingEffect::Keep => {}
            PendingEffect::Clear => self.pending_user_request = None,
            PendingEffect::Acknowledge => {
                if let Some(p) = &mut self.pending_user_request {
                    p.acknowledged = true;
                }
            }
        }
        if selected.action == DialogueActionType::Inform {
            // one-shot: an inform agenda is spoken at most once
            let _ = self.workspace.remove_agenda(&selected.agenda_id);
        }

        let closed = self.closure_pending;
        self.phase = if closed { Phase::Closed } else { Phase::Running };
        self.history.push(TurnRecord {
            turn: self.turn,
            user_input: input,
            selected: selected.clone(),
            closed,
        });
        self.turn += 1;
        Ok(selected)
    }

    /// Applies the effects of user input without selecting anything.
    pub fn apply_user_input(&mut self, input: &UserInput) {
        match input.action() {
            UserAction::Inform => {
                self.facts.extend(input.semantics());
                self.retire_satisfied_requests();
            }
            UserAction::Request => {
                self.pending_user_request = Some(PendingRequest {
                    pattern: input.semantics().clone(),
                    acknowledged: false,
                });
            }
            UserAction::Bye => self.closure_pending = true,
            UserAction::Greet | UserAction::Acknowledge | UserAction::Thank => {}
        }
    }

    /// Drops request agendas whose full pattern matches the user's facts.
    fn retire_satisfied_requests(&mut self) {
        if self.facts.is_empty() {
            return;
        }
        let satisfied: Vec<String> = self
            .workspace
            .dynamic_agendas(DialogueActionType::Request)
            .into_iter()
            .filter(|a| matches!(match_pattern(a.semantics(), &self.facts), Ok(Some(_))))
            .map(|a| a.agenda_id().to_string())
            .collect();
        for id in satisfied {
            let _ = self.workspace.remove_agenda(&id);
        }
    }

    /// Picks the next agenda. Never fails: acknowledge is always available.
    pub fn select_agenda(&self) -> Selection {
        let general = |id: &str, action| SelectedAction {
            agenda_id: id.to_string(),
            action,
            semantics: TripleSet::new(),
            binding: None,
        };
        let keep = |selected| Selection {
            selected,
            pending: PendingEffect::Keep,
        };

        if self.closure_pending {
            return keep(general(THANK_ID, DialogueActionType::Thank));
        }
        if self.phase == Phase::Fresh {
            return keep(general(GREET_ID, DialogueActionType::Greet));
        }
        let mut pending_dropped = false;
        if let Some(pending) = &self.pending_user_request {
            if let Some((agenda_id, binding)) =
                self.workspace.find_answering_agendas(&pending.pattern).into_iter().next()
            {
                let agenda = self.workspace.get(&agenda_id).expect("hit is live");
                return Selection {
                    selected: SelectedAction {
                        agenda_id,
                        action: DialogueActionType::Inform,
                        semantics: agenda.semantics().substitute(&binding),
                        binding: Some(binding),
                    },
                    pending: PendingEffect::Clear,
                };
            }
            if !pending.acknowledged {
                return Selection {
                    selected: general(ACK_ID, DialogueActionType::Acknowledge),
                    pending: PendingEffect::Acknowledge,
                };
            }
            pending_dropped = true;
        }
        let pending = if pending_dropped {
            PendingEffect::Clear
        } else {
            PendingEffect::Keep
        };
        let next = self
            .workspace
            .dynamic_agendas(DialogueActionType::Request)
            .into_iter()
            .next()
            .or_else(|| {
                self.workspace
                    .dynamic_agendas(DialogueActionType::Inform)
                    .into_iter()
                    .next()
            });
        let selected = match next {
            Some(agenda) => SelectedAction {
                agenda_id: agenda.agenda_id().to_string(),
                action: agenda.action().expect("dynamic agendas carry an action"),
                semantics: agenda.semantics().clone(),
                binding: None,
            },
            None => general(ACK_ID, DialogueActionType::Acknowledge),
        };
        Selection { selected, pending }
    }
}

#[derive(Serialize, Deserialize)]
struct UserInputRecord {
    dialogue_action: UserAction,
    semantics: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct SelectedRecord {
    agenda_id: String,
    dialogue_action: DialogueActionType,
    semantics: Vec<String>,
    binding: Option<BTreeMap<String, String>>,
}

#[derive(Serialize, Deserialize)]
struct HistoryRecord {
    turn: Turn,
    user_input: Option<UserInputRecord>,
    selected: SelectedRecord,
    closed: bool,
}

impl TurnRecord {
    /// Compact single-line JSON; terms are written in the line syntax.
    pub fn to_json(&self) -> String {
        let record = HistoryRecord {
            turn: self.turn,
            user_input: self.user_input.as_ref().map(|u| UserInputRecord {
                dialogue_action: u.action(),
                semantics: u.semantics().to_lines(),
            }),
            selected: SelectedRecord {
                agenda_id: self.selected.agenda_id.clone(),
                dialogue_action: self.selected.action,
                semantics: self.selected.semantics.to_lines(),
                binding: self
                    .selected
                    .binding
                    .as_ref()
                    .map(|b| b.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()),
            },
            closed: self.closed,
        };
        serde_json::to_string(&record).expect("history serialization cannot fail")
    }
}

/// One JSON line per record.
pub fn serialize_history(history: &[TurnRecord]) -> String {
    history.iter().map(|r| r.to_json() + "\n").collect()
}
