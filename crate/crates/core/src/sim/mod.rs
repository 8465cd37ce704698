//! Deterministic stand-ins for the external modules.
//!
//! Knowledge integration replays the snippets of a [`DomainPreset`] at their
//! scheduled turns; language analysis maps text to semantics with ordered
//! regex rules and renders agenda documents with per-action templates.

mod nlg;
mod preset;

use thiserror::Error;

use crate::ontology::{DialogueActionType, Turn};
use crate::presenter::{UserAction, UserInput};
use crate::rdf::TripleSet;
use crate::wire::{SnippetDocument, UserInputDocument};

pub use nlg::nlg;
pub use preset::{
    local_name, DomainPreset, NluRule, NluRuleEntry, PresetFile, ScheduledSnippet, SnippetEntry,
    PRESET_FORMAT,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("no template for {0}")]
    MissingTemplate(DialogueActionType),
    #[error("malformed agenda document: {0}")]
    BadDocument(String),
    #[error("{0}")]
    Preset(String),
}

/// The presets shipped with the crate: `clinic_demo` and `minimal`.
pub fn builtin_presets() -> Vec<DomainPreset> {
    [
        include_str!("../../../../presets/clinic_demo.json"),
        include_str!("../../../../presets/minimal.json"),
    ]
    .into_iter()
    .map(|text| DomainPreset::from_json(text).expect("shipped presets are valid"))
    .collect()
}

/// Loads every `*.json` file in `dir` as a preset, sorted by file name.
pub fn load_preset_dir(dir: &std::path::Path) -> Result<Vec<DomainPreset>, SimError> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| SimError::Preset(format!("{}: {e}", dir.display())))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry
            .map_err(|e| SimError::Preset(format!("{}: {e}", dir.display())))?
            .path();
        if path.extension().is_some_and(|ext| ext == "json") {
            paths.push(path);
        }
    }
    paths.sort();
    paths.iter().map(|p| DomainPreset::load(p)).collect()
}

/// Snippets scheduled for `current_turn`, in file order.
pub fn ki_release(preset: &DomainPreset, session_id: &str, current_turn: Turn) -> Vec<SnippetDocument> {
    preset
        .snippets
        .iter()
        .filter(|s| s.release_turn == current_turn)
        .map(|s| SnippetDocument::from_snippet(session_id, &s.snippet))
        .collect()
}

/// Maps user text to semantic input. The first rule that matches and yields
/// well-formed input wins; unmatched text is an acknowledgement.
pub fn nlu(preset: &DomainPreset, session_id: &str, text: &str) -> UserInputDocument {
    let text = text.trim();
    for rule in &preset.nlu_rules {
        let Some(caps) = rule.regex.captures(text) else {
            continue;
        };
        let Ok(semantics) = rule.instantiate(|name| caps.name(name).map(|m| m.as_str().to_string()))
        else {
            continue;
        };
        if let Ok(input) = UserInput::new(rule.action, semantics) {
            return UserInputDocument::from_input(session_id, &input);
        }
    }
    let fallback = UserInput::new(UserAction::Acknowledge, TripleSet::new())
        .expect("bare acknowledge is valid");
    UserInputDocument::from_input(session_id, &fallback)
}
