use crate::rdf::{Term, Triple};
use crate::wire::AgendaDocument;

use super::{DomainPreset, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Subject,
    Predicate,
    Object,
    Var,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Piece {
    Text(String),
    Slot(Slot),
}

/// A system phrase with `{subject}`, `{predicate}`, `{object}` and `{var}`
/// slots. `{subject-label}` and `{predicate-label}` are accepted as aliases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Template {
    pieces: Vec<Piece>,
}

impl Template {
    pub(crate) fn parse(text: &str, allow_slots: bool) -> Result<Self, String> {
        let mut pieces = Vec::new();
        let mut rest = text;
        while let Some(open) = rest.find('{') {
            if open > 0 {
                pieces.push(Piece::Text(rest[..open].to_string()));
            }
            let after = &rest[open + 1..];
            let close = after.find('}').ok_or_else(|| format!("unclosed slot in {text:?}"))?;
            let slot = match &after[..close] {
                "subject" | "subject-label" => Slot::Subject,
                "predicate" | "predicate-label" => Slot::Predicate,
                "object" => Slot::Object,
                "var" => Slot::Var,
                other => return Err(format!("unknown slot {{{other}}}")),
            };
            if !allow_slots {
                return Err("general phrases take no slots".into());
            }
            pieces.push(Piece::Slot(slot));
            rest = &after[close + 1..];
        }
        if !rest.is_empty() {
            pieces.push(Piece::Text(rest.to_string()));
        }
        if pieces.is_empty() {
            return Err("template is empty".into());
        }
        Ok(Template { pieces })
    }

    fn render(&self, preset: &DomainPreset, triple: Option<&Triple>) -> String {
        let mut out = String::new();
        for piece in &self.pieces {
            match (piece, triple) {
                (Piece::Text(t), _) => out.push_str(t),
                (Piece::Slot(slot), Some(triple)) => out.push_str(&slot_value(preset, *slot, triple)),
                (Piece::Slot(_), None) => {}
            }
        }
        out
    }
}

fn slot_value(preset: &DomainPreset, slot: Slot, triple: &Triple) -> String {
    let term_word = |term: &Term| match term {
        Term::Iri(iri) => preset.label(iri).to_string(),
        Term::Literal(v) | Term::Variable(v) => v.clone(),
    };
    match slot {
        Slot::Subject => term_word(triple.subject()),
        Slot::Predicate => term_word(triple.predicate()),
        Slot::Object => term_word(triple.object()),
        Slot::Var => match triple.object() {
            Term::Variable(name) => name.clone(),
            _ => String::new(),
        },
    }
}

/// Renders an agenda document as system text.
///
/// General actions use their fixed phrase; inform and request instantiate
/// their template once per triple, joined by a space in canonical order.
pub fn nlg(preset: &DomainPreset, doc: &AgendaDocument) -> Result<String, SimError> {
    let action = doc.dialogue_action;
    let template = preset
        .templates
        .get(&action)
        .ok_or(SimError::MissingTemplate(action))?;
    if action.is_general() {
        return Ok(template.render(preset, None));
    }
    let semantics = doc.semantics().map_err(SimError::BadDocument)?;
    let sentences: Vec<String> = semantics
        .iter()
        .map(|t| template.render(preset, Some(t)))
        .collect();
    Ok(sentences.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::DialogueActionType;

    fn preset() -> DomainPreset {
        DomainPreset::from_json(
            r#"{
                "format": 1,
                "name": "t",
                "labels": {"u:hasAppointment": "appointment", "u:hasPainLevel": "pain level"},
                "nlg_templates": {
                    "greet": "Hello, how can I help you?",
                    "acknowledge": "I see.",
                    "thank": "Thank you, goodbye.",
                    "inform": "Your {predicate-label} is {object}.",
                    "request": "What is your {predicate}? ({var})"
                }
            }"#,
        )
        .unwrap()
    }

    fn doc(action: DialogueActionType, semantics: &[&str]) -> AgendaDocument {
        AgendaDocument {
            session_id: "s1".into(),
            turn: 1,
            agenda_id: "a1".into(),
            dialogue_action: action,
            semantics: semantics.iter().map(|s| s.to_string()).collect(),
            closed: false,
        }
    }

    #[test]
    fn general_phrase() {
        let text = nlg(&preset(), &doc(DialogueActionType::Greet, &[])).unwrap();
        assert_eq!(text, "Hello, how can I help you?");
    }

    #[test]
    fn inform_single_triple() {
        let text = nlg(
            &preset(),
            &doc(DialogueActionType::Inform, &["<u:p1> <u:hasAppointment> \"tuesday\" ."]),
        )
        .unwrap();
        assert_eq!(text, "Your appointment is tuesday.");
    }

    #[test]
    fn inform_two_triples_in_canonical_order() {
        let text = nlg(
            &preset(),
            &doc(
                DialogueActionType::Inform,
                &[
                    "<u:p1> <u:hasPainLevel> \"7\" .",
                    "<u:p1> <u:hasAppointment> \"tuesday\" .",
                ],
            ),
        )
        .unwrap();
        assert_eq!(text, "Your appointment is tuesday. Your pain level is 7.");
    }

    #[test]
    fn request_uses_var_and_fallback_label() {
        let text = nlg(
            &preset(),
            &doc(DialogueActionType::Request, &["<u:p1> <u:hasMood> ?mood ."]),
        )
        .unwrap();
        assert_eq!(text, "What is your hasMood? (mood)");
    }

    #[test]
    fn template_errors() {
        assert!(Template::parse("{nope}", true).is_err());
        assert!(Template::parse("{object", true).is_err());
        assert!(Template::parse("Hi {object}", false).is_err());
        assert!(Template::parse("", true).is_err());
    }

    #[test]
    fn missing_template() {
        let mut p = preset();
        p.templates.remove(&DialogueActionType::Thank);
        assert_eq!(
            nlg(&p, &doc(DialogueActionType::Thank, &[])),
            Err(SimError::MissingTemplate(DialogueActionType::Thank))
        );
    }
}
