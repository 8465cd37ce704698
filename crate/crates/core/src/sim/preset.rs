use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::ontology::{DialogueActionType, InformationSnippet, Marker, SpeechPart, Turn};
use crate::presenter::{UserAction, UserInput};
use crate::wire::parse_semantics;

use super::nlg::Template;
use super::SimError;

pub const PRESET_FORMAT: u32 = 1;

/// On-disk preset layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetFile {
    pub format: u32,
    pub name: String,
    #[serde(default)]
    pub labels: BTreeMap<String, String>,
    #[serde(default)]
    pub snippets: Vec<SnippetEntry>,
    #[serde(default)]
    pub nlu_rules: Vec<NluRuleEntry>,
    pub nlg_templates: BTreeMap<DialogueActionType, String>,
    #[serde(default)]
    pub speech: SpeechPart,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnippetEntry {
    pub snippet_id: String,
    pub release_turn: Turn,
    pub marker: Marker,
    pub semantics: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NluRuleEntry {
    pub pattern: String,
    pub dialogue_action: UserAction,
    #[serde(default)]
    pub semantics: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ScheduledSnippet {
    pub release_turn: Turn,
    pub snippet: InformationSnippet,
}

/// One text-to-semantics rule. `{name}` in a semantics line is replaced by
/// the capture group of that name, escaped for use inside a literal.
#[derive(Debug, Clone)]
pub struct NluRule {
    pub regex: Regex,
    pub action: UserAction,
    pub semantics: Vec<String>,
}

/// A loaded, validated domain preset.
#[derive(Debug, Clone)]
pub struct DomainPreset {
    pub name: String,
    pub labels: BTreeMap<String, String>,
    pub snippets: Vec<ScheduledSnippet>,
    pub nlu_rules: Vec<NluRule>,
    pub(crate) templates: BTreeMap<DialogueActionType, Template>,
    pub speech: SpeechPart,
}

impl DomainPreset {
    pub fn from_json(text: &str) -> Result<Self, SimError> {
        let file: PresetFile =
            serde_json::from_str(text).map_err(|e| SimError::Preset(e.to_string()))?;
        Self::from_file(file)
    }

    pub fn load(path: &Path) -> Result<Self, SimError> {
        let text = fs::read_to_string(path)
            .map_err(|e| SimError::Preset(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| SimError::Preset(format!("{}: {e}", path.display())))
    }

    pub fn from_file(file: PresetFile) -> Result<Self, SimError> {
        let bad = |msg: String| SimError::Preset(format!("preset {:?}: {msg}", file.name));
        if file.format != PRESET_FORMAT {
            return Err(bad(format!("unsupported format {}", file.format)));
        }

        let mut snippets = Vec::with_capacity(file.snippets.len());
        for entry in &file.snippets {
            let semantics = parse_semantics(&entry.semantics)
                .map_err(|e| bad(format!("snippet {}: {e}", entry.snippet_id)))?;
            let snippet = InformationSnippet::new(entry.snippet_id.clone(), entry.marker, semantics)
                .map_err(|e| bad(e.to_string()))?;
            snippets.push(ScheduledSnippet {
                release_turn: entry.release_turn,
                snippet,
            });
        }

        let mut nlu_rules = Vec::with_capacity(file.nlu_rules.len());
        for (i, entry) in file.nlu_rules.iter().enumerate() {
            let regex = Regex::new(&entry.pattern)
                .map_err(|e| bad(format!("nlu rule {i}: {e}")))?;
            let rule = NluRule {
                regex,
                action: entry.dialogue_action,
                semantics: entry.semantics.clone(),
            };
            rule.check().map_err(|e| bad(format!("nlu rule {i}: {e}")))?;
            nlu_rules.push(rule);
        }

        let mut templates = BTreeMap::new();
        for action in DialogueActionType::ALL {
            let text = file
                .nlg_templates
                .get(&action)
                .ok_or_else(|| bad(format!("no template for {action}")))?;
            let template = Template::parse(text, !action.is_general())
                .map_err(|e| bad(format!("{action} template: {e}")))?;
            templates.insert(action, template);
        }

        file.speech
            .build_workspace()
            .map_err(|e| bad(format!("speech part: {e}")))?;

        Ok(DomainPreset {
            name: file.name,
            labels: file.labels,
            snippets,
            nlu_rules,
            templates,
            speech: file.speech,
        })
    }

    /// A preset with no snippets or rules and plain general phrases.
    pub fn empty(name: &str) -> Self {
        let file = PresetFile {
            format: PRESET_FORMAT,
            name: name.to_string(),
            labels: BTreeMap::new(),
            snippets: Vec::new(),
            nlu_rules: Vec::new(),
            nlg_templates: [
                (DialogueActionType::Greet, "Hello."),
                (DialogueActionType::Acknowledge, "Okay."),
                (DialogueActionType::Thank, "Thank you. Goodbye."),
                (DialogueActionType::Inform, "The {predicate} of {subject} is {object}."),
                (DialogueActionType::Request, "What is the {predicate} of {subject}?"),
            ]
            .into_iter()
            .map(|(a, t)| (a, t.to_string()))
            .collect(),
            speech: SpeechPart::default(),
        };
        Self::from_file(file).expect("built-in empty preset is valid")
    }

    /// Human word for an IRI: the label when present, else the local name.
    pub fn label<'a>(&'a self, iri: &'a str) -> &'a str {
        self.labels
            .get(iri)
            .map(String::as_str)
            .unwrap_or_else(|| local_name(iri))
    }
}

/// The part after the last `#`, `/` or `:`.
pub fn local_name(iri: &str) -> &str {
    match iri.rfind(['#', '/', ':']) {
        Some(pos) if pos + 1 < iri.len() => &iri[pos + 1..],
        _ => iri,
    }
}

impl NluRule {
    /// Checks that placeholders name capture groups and that the rule yields
    /// well-formed input when every capture is a plain word.
    fn check(&self) -> Result<(), String> {
        let names: Vec<&str> = self.regex.capture_names().flatten().collect();
        for line in &self.semantics {
            for name in placeholders(line) {
                if !names.contains(&name) {
                    return Err(format!("placeholder {{{name}}} has no capture group"));
                }
            }
        }
        let sample = self.instantiate(|_| Some("sample".to_string()))?;
        UserInput::new(self.action, sample).map_err(|e| e.to_string())?;
        Ok(())
    }

    pub(crate) fn instantiate(
        &self,
        capture: impl Fn(&str) -> Option<String>,
    ) -> Result<crate::rdf::TripleSet, String> {
        let lines: Vec<String> = self
            .semantics
            .iter()
            .map(|line| {
                let mut out = String::with_capacity(line.len());
                let mut rest = line.as_str();
                while let Some(open) = rest.find('{') {
                    out.push_str(&rest[..open]);
                    let after = &rest[open + 1..];
                    match after.find('}') {
                        Some(close) if is_placeholder(&after[..close]) => {
                            let value = capture(&after[..close]).unwrap_or_default();
                            out.push_str(&escape_literal(&value));
                            rest = &after[close + 1..];
                        }
                        _ => {
                            out.push('{');
                            rest = after;
                        }
                    }
                }
                out.push_str(rest);
                out
            })
            .collect();
        parse_semantics(&lines)
    }
}

fn is_placeholder(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn placeholders(line: &str) -> Vec<&str> {
    let mut found = Vec::new();
    let mut rest = line;
    while let Some(open) = rest.find('{') {
        let after = &rest[open + 1..];
        match after.find('}') {
            Some(close) if is_placeholder(&after[..close]) => {
                found.push(&after[..close]);
                rest = &after[close + 1..];
            }
            _ => rest = after,
        }
    }
    found
}

fn escape_literal(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{
        "format": 1,
        "name": "t",
        "nlg_templates": {
            "greet": "Hi.", "acknowledge": "Ok.", "thank": "Bye.",
            "inform": "{predicate} is {object}.", "request": "What is {predicate}?"
        }
    }"#;

    fn with(field: &str, value: &str) -> String {
        let mut v: serde_json::Value = serde_json::from_str(BASE).unwrap();
        v[field] = serde_json::from_str(value).unwrap();
        v.to_string()
    }

    #[test]
    fn minimal_preset_loads() {
        let p = DomainPreset::from_json(BASE).unwrap();
        assert_eq!(p.name, "t");
        assert!(p.snippets.is_empty() && p.nlu_rules.is_empty());
    }

    #[test]
    fn missing_template_rejected() {
        let text = with("nlg_templates", r#"{"greet": "Hi."}"#);
        let err = DomainPreset::from_json(&text).unwrap_err();
        assert!(err.to_string().contains("no template"), "{err}");
    }

    #[test]
    fn wrong_format_rejected() {
        assert!(DomainPreset::from_json(&with("format", "2")).is_err());
    }

    #[test]
    fn invalid_snippet_rejected() {
        let text = with(
            "snippets",
            r#"[{"snippet_id": "x", "release_turn": 0, "marker": "informable", "semantics": ["<a> <b> ?c ."]}]"#,
        );
        assert!(DomainPreset::from_json(&text).is_err());
    }

    #[test]
    fn rule_placeholders_checked() {
        let text = with(
            "nlu_rules",
            r#"[{"pattern": "pain is (?P<n>\\d+)", "dialogue_action": "inform", "semantics": ["<u:p1> <u:pain> \"{level}\" ."]}]"#,
        );
        let err = DomainPreset::from_json(&text).unwrap_err();
        assert!(err.to_string().contains("{level}"), "{err}");

        let text = with(
            "nlu_rules",
            r#"[{"pattern": "when", "dialogue_action": "request", "semantics": ["<u:p1> <u:a> \"x\" ."]}]"#,
        );
        assert!(DomainPreset::from_json(&text).is_err());
    }

    #[test]
    fn labels_and_local_names() {
        let p = DomainPreset::from_json(&with("labels", r#"{"u:hasAppointment": "appointment"}"#)).unwrap();
        assert_eq!(p.label("u:hasAppointment"), "appointment");
        assert_eq!(p.label("u:hasPainLevel"), "hasPainLevel");
        assert_eq!(local_name("http://x.org/onto#Pain"), "Pain");
        assert_eq!(local_name("http://x.org/onto/pain"), "pain");
        assert_eq!(local_name("plain"), "plain");
        assert_eq!(local_name("trailing:"), "trailing:");
    }

    #[test]
    fn capture_escaping() {
        let rule = NluRule {
            regex: Regex::new("(?P<v>.*)").unwrap(),
            action: UserAction::Inform,
            semantics: vec!["<u:p1> <u:said> \"{v}\" .".into()],
        };
        let ts = rule.instantiate(|_| Some("a \"quoted\" \\ word".into())).unwrap();
        assert_eq!(ts.iter().next().unwrap().object().value(), "a \"quoted\" \\ word");
    }
}
