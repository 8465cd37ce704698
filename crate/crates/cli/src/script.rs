//! Dialogue scripts: a `preset:` header followed by one step per line.

use std::fmt;

use owlspeak_core::wire::{decode, UserInputDocument};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {reason}")]
pub struct ScriptError {
    pub line: usize,
    pub reason: String,
}

/// One user turn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// `-`: the user says nothing.
    Silent,
    /// Free text for the language-understanding rules.
    Text(String),
    /// `@semantic {...}`: a user input document, bypassing the rules.
    Semantic { raw: String, doc: UserInputDocument },
}

impl Step {
    pub fn parse(line: &str) -> Result<Step, String> {
        let line = line.trim();
        if line == "-" {
            return Ok(Step::Silent);
        }
        if let Some(json) = line.strip_prefix("@semantic") {
            let doc: UserInputDocument = decode(json.trim()).map_err(|e| e.to_string())?;
            return Ok(Step::Semantic {
                raw: line.to_string(),
                doc,
            });
        }
        if line.is_empty() {
            return Err("empty step".into());
        }
        Ok(Step::Text(line.to_string()))
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Silent => f.write_str("-"),
            Step::Text(t) => f.write_str(t),
            Step::Semantic { raw, .. } => f.write_str(raw),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Script {
    pub preset: String,
    /// Steps with their 1-based source line.
    pub steps: Vec<(usize, Step)>,
}

impl Script {
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Script, ScriptError> {
        let mut preset = None;
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if preset.is_none() {
                let name = trimmed
                    .strip_prefix("preset:")
                    .ok_or_else(|| ScriptError {
                        line,
                        reason: "expected `preset: <name>` header".into(),
                    })?;
                preset = Some(name.trim().to_string());
                continue;
            }
            let step = Step::parse(trimmed).map_err(|reason| ScriptError { line, reason })?;
            steps.push((line, step));
        }
        let Some(preset) = preset else {
            return Err(ScriptError {
                line: 0,
                reason: "script is empty".into(),
            });
        };
        if steps.is_empty() {
            return Err(ScriptError {
                line: 0,
                reason: "script has no steps".into(),
            });
        }
        Ok(Script { preset, steps })
    }
}
