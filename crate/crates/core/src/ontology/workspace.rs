use std::collections::BTreeMap;

use crate::rdf::{match_pattern, Binding, TripleSet};

use super::{
    generated_serial, Agenda, AgendaKind, DialogueActionType,
    InformationSnippet, OntologyError, Turn,
};

pub const GREET_ID: &str = "g_greet";
pub const ACK_ID: &str = "g_ack";
pub const THANK_ID: &str = "g_thank";

/// Every agenda that might be executed in a following turn.
///
/// The greet, acknowledge and thank agendas are created with the workspace and
/// can never be removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkSpace {
    agendas: BTreeMap<String, Agenda>,
    next_serial: u64,
}

impl Default for WorkSpace {
    fn default() -> Self {
        Self::new()
    }
}

impl WorkSpace {
    pub fn new() -> Self {
        let agendas = [
            (GREET_ID, DialogueActionType::Greet),
            (ACK_ID, DialogueActionType::Acknowledge),
            (THANK_ID, DialogueActionType::Thank),
        ]
        .into_iter()
        .map(|(id, action)| (id.to_string(), Agenda::general(id, action)))
        .collect();
        WorkSpace {
            agendas,
            next_serial: 1,
        }
    }

    pub(crate) fn from_parts(agendas: BTreeMap<String, Agenda>, next_serial: u64) -> Self {
        WorkSpace {
            agendas,
            next_serial,
        }
    }

    pub fn next_serial(&self) -> u64 {
        self.next_serial
    }

    pub fn len(&self) -> usize {
        self.agendas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agendas.is_empty()
    }

    pub fn get(&self, agenda_id: &str) -> Option<&Agenda> {
        self.agendas.get(agenda_id)
    }

    pub fn contains(&self, agenda_id: &str) -> bool {
        self.agendas.contains_key(agenda_id)
    }

    /// Agendas oldest first, ties broken by id.
    pub fn agendas(&self) -> Vec<&Agenda> {
        let mut all: Vec<&Agenda> = self.agendas.values().collect();
        all.sort_by(|a, b| a.age_order(b));
        all
    }

    /// Live dynamic agendas carrying `action`, oldest first.
    pub fn dynamic_agendas(&self, action: DialogueActionType) -> Vec<&Agenda> {
        let mut hits: Vec<&Agenda> = self
            .agendas
            .values()
            .filter(|a| a.kind() == AgendaKind::Dynamic && a.action() == Some(action))
            .collect();
        hits.sort_by(|a, b| a.age_order(b));
        hits
    }

    /// Adds a dynamic agenda for the snippet, stamped with `current_turn`.
    ///
    /// A snippet whose marker and semantics are already held by a live agenda
    /// is not added again; the existing agenda id is returned.
    pub fn create_agenda_from_snippet(
        &mut self,
        snippet: &InformationSnippet,
        current_turn: Turn,
    ) -> Result<String, OntologyError> {
        let action = snippet.marker().action();
        if let Some(existing) = self.agendas.values().find(|a| {
            a.kind() == AgendaKind::Dynamic
                && a.action() == Some(action)
                && a.semantics() == snippet.semantics()
        }) {
            return Ok(existing.agenda_id().to_string());
        }
        let id = format!("a{}", self.next_serial);
        let agenda = Agenda::dynamic(id.clone(), snippet, current_turn);
        agenda
            .validate()
            .map_err(|e| OntologyError::InvalidSnippet(e.to_string()))?;
        self.next_serial += 1;
        self.agendas.insert(id.clone(), agenda);
        Ok(id)
    }

    /// Adds a legacy move-based agenda under its own id.
    pub fn insert_legacy(&mut self, agenda: Agenda) -> Result<(), OntologyError> {
        if agenda.kind() != AgendaKind::Legacy {
            return Err(OntologyError::InvalidAgenda(format!(
                "{}: not a legacy agenda",
                agenda.agenda_id()
            )));
        }
        if generated_serial(agenda.agenda_id()).is_some() {
            return Err(OntologyError::InvalidAgenda(format!(
                "{}: ids of the form a<number> are reserved",
                agenda.agenda_id()
            )));
        }
        if self.agendas.contains_key(agenda.agenda_id()) {
            return Err(OntologyError::DuplicateAgendaId(agenda.agenda_id().to_string()));
        }
        self.agendas.insert(agenda.agenda_id().to_string(), agenda);
        Ok(())
    }

    pub fn remove_agenda(&mut self, agenda_id: &str) -> Result<Agenda, OntologyError> {
        match self.agendas.get(agenda_id) {
            None => Err(OntologyError::UnknownAgenda(agenda_id.to_string())),
            Some(a) if a.kind() == AgendaKind::General => {
                Err(OntologyError::GeneralAgendaImmutable(agenda_id.to_string()))
            }
            Some(_) => Ok(self.agendas.remove(agenda_id).expect("checked above")),
        }
    }

    /// Inform agendas whose semantics satisfy the request pattern, oldest first.
    pub fn find_answering_agendas(&self, request_pattern: &TripleSet) -> Vec<(String, Binding)> {
        self.dynamic_agendas(DialogueActionType::Inform)
            .into_iter()
            .filter_map(|agenda| {
                match_pattern(request_pattern, agenda.semantics())
                    .ok()
                    .flatten()
                    .map(|binding| (agenda.agenda_id().to_string(), binding))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{GrammarMove, Marker};
    use crate::rdf::{parse_document, Term};

    fn snippet(id: &str, marker: Marker, doc: &str) -> InformationSnippet {
        InformationSnippet::new(id, marker, parse_document(doc).unwrap()).unwrap()
    }

    #[test]
    fn fresh_workspace_has_generals() {
        let ws = WorkSpace::new();
        assert_eq!(ws.len(), 3);
        for (id, action) in [
            (GREET_ID, DialogueActionType::Greet),
            (ACK_ID, DialogueActionType::Acknowledge),
            (THANK_ID, DialogueActionType::Thank),
        ] {
            let a = ws.get(id).unwrap();
            assert_eq!(a.action(), Some(action));
            assert_eq!(a.kind(), AgendaKind::General);
            assert!(a.semantics().is_empty());
            assert_eq!(a.inserted_turn(), 0);
        }
        assert_eq!(WorkSpace::new(), WorkSpace::new());
    }

    #[test]
    fn informable_becomes_inform() {
        let mut ws = WorkSpace::new();
        let s = snippet("s1", Marker::Informable, "<u:p1> <u:hasAppointment> \"tuesday\" .");
        let id = ws.create_agenda_from_snippet(&s, 2).unwrap();
        let a = ws.get(&id).unwrap();
        assert_eq!(a.action(), Some(DialogueActionType::Inform));
        assert_eq!(a.inserted_turn(), 2);
        assert_eq!(a.source_snippet(), Some("s1"));
        assert!(a.utterance_move().is_none());
    }

    #[test]
    fn requestable_becomes_request() {
        let mut ws = WorkSpace::new();
        let s = snippet("s2", Marker::Requestable, "<u:p1> <u:hasPainLevel> ?x .");
        let id = ws.create_agenda_from_snippet(&s, 0).unwrap();
        assert_eq!(ws.get(&id).unwrap().action(), Some(DialogueActionType::Request));
    }

    #[test]
    fn duplicate_snippet_is_idempotent() {
        let mut ws = WorkSpace::new();
        let s = snippet("s1", Marker::Informable, "<u:p1> <u:hasAppointment> \"tuesday\" .");
        let first = ws.create_agenda_from_snippet(&s, 1).unwrap();
        let again = snippet("other-id", Marker::Informable, "<u:p1> <u:hasAppointment> \"tuesday\" .");
        let second = ws.create_agenda_from_snippet(&again, 3).unwrap();
        assert_eq!(first, second);
        assert_eq!(ws.len(), 4);
        assert_eq!(ws.get(&first).unwrap().inserted_turn(), 1);
    }

    #[test]
    fn ids_increase() {
        let mut ws = WorkSpace::new();
        let a = ws
            .create_agenda_from_snippet(&snippet("s1", Marker::Informable, "<a> <b> \"1\" ."), 0)
            .unwrap();
        ws.remove_agenda(&a).unwrap();
        let b = ws
            .create_agenda_from_snippet(&snippet("s1", Marker::Informable, "<a> <b> \"1\" ."), 0)
            .unwrap();
        assert_eq!((a.as_str(), b.as_str()), ("a1", "a2"));
    }

    #[test]
    fn removal_rules() {
        let mut ws = WorkSpace::new();
        let id = ws
            .create_agenda_from_snippet(&snippet("s", Marker::Informable, "<a> <b> <c> ."), 0)
            .unwrap();
        ws.remove_agenda(&id).unwrap();
        assert!(!ws.contains(&id));
        assert_eq!(
            ws.remove_agenda(GREET_ID),
            Err(OntologyError::GeneralAgendaImmutable(GREET_ID.into()))
        );
        assert_eq!(ws.remove_agenda("nope"), Err(OntologyError::UnknownAgenda("nope".into())));
        assert_eq!(ws.len(), 3);
    }

    #[test]
    fn answering_agendas_ordered_by_age() {
        let mut ws = WorkSpace::new();
        let late = ws
            .create_agenda_from_snippet(
                &snippet("late", Marker::Informable, "<u:p1> <u:hasAppointment> \"friday\" ."),
                3,
            )
            .unwrap();
        let early = ws
            .create_agenda_from_snippet(
                &snippet("early", Marker::Informable, "<u:p1> <u:hasAppointment> \"tuesday\" ."),
                1,
            )
            .unwrap();
        ws.create_agenda_from_snippet(
            &snippet("other", Marker::Informable, "<u:p1> <u:hasDoctor> \"dr_a\" ."),
            0,
        )
        .unwrap();
        let pattern = parse_document("<u:p1> <u:hasAppointment> ?x .").unwrap();
        let hits = ws.find_answering_agendas(&pattern);
        let ids: Vec<&str> = hits.iter().map(|(id, _)| id.as_str()).collect();
        assert_eq!(ids, vec![early.as_str(), late.as_str()]);
        assert_eq!(hits[0].1.get("x"), Some(&Term::literal("tuesday")));
        assert!(WorkSpace::new().find_answering_agendas(&pattern).is_empty());
    }

    #[test]
    fn legacy_agendas() {
        let mut ws = WorkSpace::new();
        let gm = vec![GrammarMove {
            id: "gm".into(),
            pattern: "yes".into(),
        }];
        ws.insert_legacy(Agenda::legacy("legacy_confirm", None, gm.clone()).unwrap())
            .unwrap();
        assert_eq!(
            ws.insert_legacy(Agenda::legacy("legacy_confirm", None, gm.clone()).unwrap()),
            Err(OntologyError::DuplicateAgendaId("legacy_confirm".into()))
        );
        assert!(ws.insert_legacy(Agenda::legacy("a3", None, gm).unwrap()).is_err());
        ws.remove_agenda("legacy_confirm").unwrap();
    }
}
