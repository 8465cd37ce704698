//! Workspace snapshot file: pretty-printed JSON, triples as single-line strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::rdf::{parse_triple, TripleSet};

use super::{
    generated_serial, Agenda, AgendaKind, DialogueActionType, GrammarMove, OntologyError, Turn,
    UtteranceMove, WorkSpace, ACK_ID, GREET_ID, THANK_ID,
};

pub const SNAPSHOT_FORMAT: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceSnapshot {
    pub format: u32,
    pub next_serial: u64,
    pub agendas: Vec<AgendaRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgendaRecord {
    pub agenda_id: String,
    pub kind: AgendaKind,
    pub dialogue_action: Option<DialogueActionType>,
    pub semantics: Vec<String>,
    pub inserted_turn: Turn,
    pub source_snippet: Option<String>,
    pub utterance_move: Option<UtteranceMove>,
    pub grammar_moves: Vec<GrammarMove>,
}

impl From<&WorkSpace> for WorkspaceSnapshot {
    fn from(ws: &WorkSpace) -> Self {
        WorkspaceSnapshot {
            format: SNAPSHOT_FORMAT,
            next_serial: ws.next_serial(),
            agendas: ws
                .agendas()
                .into_iter()
                .map(|a| AgendaRecord {
                    agenda_id: a.agenda_id().to_string(),
                    kind: a.kind(),
                    dialogue_action: a.action(),
                    semantics: a.semantics().to_lines(),
                    inserted_turn: a.inserted_turn(),
                    source_snippet: a.source_snippet().map(str::to_string),
                    utterance_move: a.utterance_move().cloned(),
                    grammar_moves: a.grammar_moves().to_vec(),
                })
                .collect(),
        }
    }
}

impl TryFrom<WorkspaceSnapshot> for WorkSpace {
    type Error = OntologyError;

    fn try_from(snap: WorkspaceSnapshot) -> Result<Self, Self::Error> {
        let bad = |msg: String| OntologyError::Snapshot(msg);
        if snap.format != SNAPSHOT_FORMAT {
            return Err(bad(format!("unsupported format {}", snap.format)));
        }
        let mut agendas = BTreeMap::new();
        for rec in snap.agendas {
            let mut semantics = TripleSet::new();
            for line in &rec.semantics {
                let triple = parse_triple(line)
                    .map_err(|e| bad(format!("agenda {}: {e}", rec.agenda_id)))?;
                semantics.insert(triple);
            }
            if let Some(serial) = generated_serial(&rec.agenda_id) {
                if serial >= snap.next_serial {
                    return Err(bad(format!(
                        "agenda {} is not below next_serial {}",
                        rec.agenda_id, snap.next_serial
                    )));
                }
            }
            let agenda = Agenda {
                agenda_id: rec.agenda_id.clone(),
                kind: rec.kind,
                action: rec.dialogue_action,
                semantics,
                inserted_turn: rec.inserted_turn,
                utterance_move: rec.utterance_move,
                grammar_moves: rec.grammar_moves,
                source_snippet: rec.source_snippet,
            };
            agenda.validate().map_err(|e| bad(e.to_string()))?;
            if agendas.insert(rec.agenda_id.clone(), agenda).is_some() {
                return Err(bad(format!("duplicate agenda id {}", rec.agenda_id)));
            }
        }
        let fresh = WorkSpace::new();
        for id in [GREET_ID, ACK_ID, THANK_ID] {
            if agendas.get(id) != fresh.get(id) {
                return Err(bad(format!("general agenda {id} missing or altered")));
            }
        }
        if let Some(stray) = agendas
            .values()
            .find(|a| a.kind() == AgendaKind::General && ![GREET_ID, ACK_ID, THANK_ID].contains(&a.agenda_id()))
        {
            return Err(bad(format!("unexpected general agenda {}", stray.agenda_id())));
        }
        Ok(WorkSpace::from_parts(agendas, snap.next_serial))
    }
}

pub fn save_snapshot(ws: &WorkSpace) -> String {
    let mut text = serde_json::to_string_pretty(&WorkspaceSnapshot::from(ws))
        .expect("snapshot serialization cannot fail");
    text.push('\n');
    text
}

pub fn load_snapshot(text: &str) -> Result<WorkSpace, OntologyError> {
    let snap: WorkspaceSnapshot =
        serde_json::from_str(text).map_err(|e| OntologyError::Snapshot(e.to_string()))?;
    WorkSpace::try_from(snap)
}
