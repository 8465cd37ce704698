use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex, MutexGuard, RwLock};

use serde::{Deserialize, Serialize};

use crate::ontology::InformationSnippet;
use crate::presenter::{DialogueState, Phase, TurnRecord};
use crate::sim::{ki_release, nlg, nlu, DomainPreset};

use super::{AgendaDocument, ServiceError, SnippetDocument, UserInputDocument, WorkspaceDocument};

struct SessionData {
    preset: Arc<DomainPreset>,
    state: DialogueState,
}

struct SessionSlot {
    busy: AtomicBool,
    data: Mutex<SessionData>,
}

impl SessionSlot {
    fn lock(&self) -> MutexGuard<'_, SessionData> {
        self.data.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
    }
}

/// Marks a session as mid-turn until dropped. While held, further turns on the
/// session fail with [`ServiceError::TurnInProgress`].
pub struct TurnGuard {
    slot: Arc<SessionSlot>,
}

impl Drop for TurnGuard {
    fn drop(&mut self) {
        self.slot.busy.store(false, Ordering::Release);
    }
}

/// Result of one text-driven turn through the built-in stubs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConverseOutcome {
    pub user_input: Option<UserInputDocument>,
    pub released: Vec<String>,
    pub agenda: AgendaDocument,
    pub system_text: String,
}

/// All live sessions plus the presets they can be created from.
///
/// Turns within a session are serialized; distinct sessions share nothing
/// mutable besides the session table itself.
pub struct SessionService {
    presets: BTreeMap<String, Arc<DomainPreset>>,
    sessions: RwLock<HashMap<String, Arc<SessionSlot>>>,
    next_session: AtomicU64,
}

impl SessionService {
    /// The empty preset is always available under the name `""`.
    pub fn new(presets: impl IntoIterator<Item = DomainPreset>) -> Self {
        let mut map: BTreeMap<String, Arc<DomainPreset>> = presets
            .into_iter()
            .map(|p| (p.name.clone(), Arc::new(p)))
            .collect();
        map.entry(String::new())
            .or_insert_with(|| Arc::new(DomainPreset::empty("")));
        SessionService {
            presets: map,
            sessions: RwLock::new(HashMap::new()),
            next_session: AtomicU64::new(1),
        }
    }

    pub fn preset_names(&self) -> Vec<&str> {
        self.presets.keys().map(String::as_str).collect()
    }

    pub fn preset(&self, name: &str) -> Option<Arc<DomainPreset>> {
        self.presets.get(name).cloned()
    }

    fn slot(&self, session_id: &str) -> Result<Arc<SessionSlot>, ServiceError> {
        self.sessions
            .read()
            .unwrap_or_else(|p| p.into_inner())
            .get(session_id)
            .cloned()
            .ok_or_else(|| ServiceError::UnknownSession(session_id.to_string()))
    }

    /// Creates a fresh session from a preset and returns its id.
    pub fn post_session(&self, preset_name: &str) -> Result<String, ServiceError> {
        let preset = self
            .preset(preset_name)
            .ok_or_else(|| ServiceError::UnknownPreset(preset_name.to_string()))?;
        let workspace = preset
            .speech
            .build_workspace()
            .expect("speech part validated at preset load");
        let id = format!("s{}", self.next_session.fetch_add(1, Ordering::Relaxed));
        let slot = Arc::new(SessionSlot {
            busy: AtomicBool::new(false),
            data: Mutex::new(SessionData {
                preset,
                state: DialogueState::new(id.clone(), workspace),
            }),
        });
        self.sessions
            .write()
            .unwrap_or_else(|p| p.into_inner())
            .insert(id.clone(), slot);
        Ok(id)
    }

    /// Turns snippet documents into agendas stamped with the current turn.
    /// The batch is applied atomically.
    pub fn post_snippets(
        &self,
        session_id: &str,
        docs: &[SnippetDocument],
    ) -> Result<Vec<String>, ServiceError> {
        let slot = self.slot(session_id)?;
        let mut data = slot.lock();
        apply_snippets(&mut data.state, docs)
    }

    /// Reserves the session for one turn.
    pub fn begin_turn(&self, session_id: &str) -> Result<TurnGuard, ServiceError> {
        let slot = self.slot(session_id)?;
        slot.busy
            .compare_exchange(false, true, Ordering::AcqRel, Ordering::Acquire)
            .map_err(|_| ServiceError::TurnInProgress)?;
        Ok(TurnGuard { slot })
    }

    pub fn post_turn(
        &self,
        session_id: &str,
        input: Option<&UserInputDocument>,
    ) -> Result<AgendaDocument, ServiceError> {
        let guard = self.begin_turn(session_id)?;
        let mut data = guard.slot.lock();
        run_turn(&mut data.state, input)
    }

    pub fn get_workspace(&self, session_id: &str) -> Result<WorkspaceDocument, ServiceError> {
        let slot = self.slot(session_id)?;
        let data = slot.lock();
        let state = &data.state;
        Ok(WorkspaceDocument::new(
            state.session_id(),
            state.turn(),
            state.phase(),
            state.workspace(),
        ))
    }

    pub fn history(&self, session_id: &str) -> Result<Vec<TurnRecord>, ServiceError> {
        let slot = self.slot(session_id)?;
        let data = slot.lock();
        Ok(data.state.history().to_vec())
    }

    /// One turn driven by text: release scheduled snippets, analyse the text
    /// (if any), run the turn and render the reply with the session's preset.
    pub fn converse(&self, session_id: &str, text: Option<&str>) -> Result<ConverseOutcome, ServiceError> {
        let guard = self.begin_turn(session_id)?;
        let mut data = guard.slot.lock();
        let SessionData { preset, state } = &mut *data;
        if state.phase() == Phase::Closed {
            return Err(ServiceError::SessionClosed);
        }
        let docs = ki_release(preset, session_id, state.turn());
        let user_input = text.map(|t| nlu(preset, session_id, t));
        // validate before touching the workspace so a bad turn changes nothing
        if let Some(doc) = &user_input {
            doc.to_input()?;
        }
        let mut staged = state.clone();
        let released = apply_snippets(&mut staged, &docs)?;
        let agenda = run_turn(&mut staged, user_input.as_ref())?;
        let system_text = nlg(preset, &agenda).map_err(|e| ServiceError::MalformedDocument {
            reason: e.to_string(),
        })?;
        *state = staged;
        Ok(ConverseOutcome {
            user_input,
            released,
            agenda,
            system_text,
        })
    }
}

fn apply_snippets(state: &mut DialogueState, docs: &[SnippetDocument]) -> Result<Vec<String>, ServiceError> {
    if state.phase() == Phase::Closed {
        return Err(ServiceError::SessionClosed);
    }
    let snippets = docs
        .iter()
        .enumerate()
        .map(|(index, doc)| {
            if doc.session_id != state.session_id() {
                return Err(ServiceError::InvalidSnippet {
                    index,
                    reason: format!("addressed to session {:?}", doc.session_id),
                });
            }
            doc.to_snippet()
                .map_err(|reason| ServiceError::InvalidSnippet { index, reason })
        })
        .collect::<Result<Vec<InformationSnippet>, _>>()?;
    let turn = state.turn();
    let mut workspace = state.workspace().clone();
    let ids = snippets
        .iter()
        .enumerate()
        .map(|(index, s)| {
            workspace
                .create_agenda_from_snippet(s, turn)
                .map_err(|e| ServiceError::InvalidSnippet {
                    index,
                    reason: e.to_string(),
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    *state.workspace_mut() = workspace;
    Ok(ids)
}

fn run_turn(state: &mut DialogueState, input: Option<&UserInputDocument>) -> Result<AgendaDocument, ServiceError> {
    let input = match input {
        Some(doc) => {
            if doc.session_id != state.session_id() {
                return Err(ServiceError::MalformedDocument {
                    reason: format!("input addressed to session {:?}", doc.session_id),
                });
            }
            Some(doc.to_input()?)
        }
        None => None,
    };
    let turn = state.turn();
    let selected = state.run_turn(input)?;
    Ok(AgendaDocument::new(
        state.session_id(),
        turn,
        &selected,
        state.phase() == Phase::Closed,
    ))
}
