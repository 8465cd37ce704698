use serde::{Deserialize, Serialize};

use super::{Agenda, GrammarMove, OntologyError, UtteranceMove, WorkSpace};

/// The static half of the ontology: predefined moves and the move-based
/// agendas built from them.
///
/// Legacy agendas are loaded into every session workspace but the selection
/// policy never picks them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeechPart {
    #[serde(default)]
    pub utterance_moves: Vec<UtteranceMove>,
    #[serde(default)]
    pub grammar_moves: Vec<GrammarMove>,
    #[serde(default)]
    pub legacy_agendas: Vec<LegacyAgendaDef>,
}

/// A legacy agenda referring to moves by id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LegacyAgendaDef {
    pub agenda_id: String,
    #[serde(default)]
    pub utterance_move: Option<String>,
    pub grammar_moves: Vec<String>,
}

impl SpeechPart {
    pub fn is_empty(&self) -> bool {
        self.utterance_moves.is_empty() && self.grammar_moves.is_empty() && self.legacy_agendas.is_empty()
    }

    /// Resolves move references into concrete agendas.
    pub fn legacy_agendas(&self) -> Result<Vec<Agenda>, OntologyError> {
        self.legacy_agendas
            .iter()
            .map(|def| {
                let utterance = def
                    .utterance_move
                    .as_ref()
                    .map(|id| {
                        self.utterance_moves
                            .iter()
                            .find(|m| &m.id == id)
                            .cloned()
                            .ok_or_else(|| unknown_move(&def.agenda_id, id))
                    })
                    .transpose()?;
                let grammars = def
                    .grammar_moves
                    .iter()
                    .map(|id| {
                        self.grammar_moves
                            .iter()
                            .find(|m| &m.id == id)
                            .cloned()
                            .ok_or_else(|| unknown_move(&def.agenda_id, id))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Agenda::legacy(def.agenda_id.clone(), utterance, grammars)
            })
            .collect()
    }

    /// A fresh workspace holding the general agendas plus every legacy agenda.
    pub fn build_workspace(&self) -> Result<WorkSpace, OntologyError> {
        let mut ws = WorkSpace::new();
        for agenda in self.legacy_agendas()? {
            ws.insert_legacy(agenda)?;
        }
        Ok(ws)
    }
}

fn unknown_move(agenda_id: &str, move_id: &str) -> OntologyError {
    OntologyError::InvalidAgenda(format!("{agenda_id}: unknown move {move_id:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn speech() -> SpeechPart {
        serde_json::from_str(
            r#"{
                "utterance_moves": [{"id": "u_confirm", "utterance": "Shall I go on?"}],
                "grammar_moves": [{"id": "g_yes", "pattern": "yes | sure"}, {"id": "g_no", "pattern": "no"}],
                "legacy_agendas": [
                    {"agenda_id": "confirm", "utterance_move": "u_confirm", "grammar_moves": ["g_yes", "g_no"]},
                    {"agenda_id": "listen", "grammar_moves": ["g_yes"]}
                ]
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn resolves_moves() {
        let ws = speech().build_workspace().unwrap();
        assert_eq!(ws.len(), 5);
        let confirm = ws.get("confirm").unwrap();
        assert_eq!(confirm.utterance_move().unwrap().utterance, "Shall I go on?");
        assert_eq!(confirm.grammar_moves().len(), 2);
        assert!(ws.get("listen").unwrap().utterance_move().is_none());
    }

    #[test]
    fn unknown_move_reference() {
        let mut s = speech();
        s.legacy_agendas[0].grammar_moves.push("g_missing".into());
        assert!(matches!(s.build_workspace(), Err(OntologyError::InvalidAgenda(_))));
    }

    #[test]
    fn empty_speech_part() {
        assert!(SpeechPart::default().is_empty());
        assert_eq!(SpeechPart::default().build_workspace().unwrap(), WorkSpace::new());
    }
}
