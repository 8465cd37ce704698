//! The text loop: release, analyse, turn, render.

use owlspeak_core::sim::{ki_release, nlg, nlu, DomainPreset, SimError};
use owlspeak_core::wire::UserInputDocument;
use thiserror::Error;

use crate::backend::{agenda, Backend, BackendError};
use crate::script::{Script, ScriptError, Step};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("script: {0}")]
    Script(#[from] ScriptError),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("line {0}: step after the session closed")]
    AfterClose(usize),
    #[error("service: {0}")]
    Backend(#[from] BackendError),
    #[error("render: {0}")]
    Render(#[from] SimError),
}

/// What one turn produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TurnOutput {
    pub turn: u64,
    pub agenda_text: String,
    pub system_text: String,
    pub closed: bool,
}

/// One open session driven from text.
pub struct Dialogue<'a, B: Backend + ?Sized> {
    backend: &'a B,
    preset: &'a DomainPreset,
    session_id: String,
    next_turn: u64,
    closed: bool,
}

impl<'a, B: Backend + ?Sized> Dialogue<'a, B> {
    pub fn open(backend: &'a B, preset: &'a DomainPreset) -> Result<Self, RunError> {
        let session_id = backend.create_session(&preset.name)?;
        Ok(Dialogue {
            backend,
            preset,
            session_id,
            next_turn: 0,
            closed: false,
        })
    }

    pub fn session_id(&self) -> &str {
        &self.session_id
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn step(&mut self, step: &Step) -> Result<TurnOutput, RunError> {
        let released = ki_release(self.preset, &self.session_id, self.next_turn);
        if !released.is_empty() {
            self.backend.post_snippets(&self.session_id, &released)?;
        }
        let input = match step {
            Step::Silent => None,
            Step::Text(text) => Some(nlu(self.preset, &self.session_id, text)),
            Step::Semantic { doc, .. } => Some(UserInputDocument {
                session_id: self.session_id.clone(),
                ..doc.clone()
            }),
        };
        let agenda_text = self.backend.post_turn(&self.session_id, input.as_ref())?;
        let doc = agenda(&agenda_text)?;
        let system_text = nlg(self.preset, &doc)?;
        self.next_turn = doc.turn + 1;
        self.closed = doc.closed;
        Ok(TurnOutput {
            turn: doc.turn,
            agenda_text,
            system_text,
            closed: doc.closed,
        })
    }

    pub fn workspace(&self) -> Result<String, RunError> {
        Ok(self.backend.workspace(&self.session_id)?)
    }
}

/// Runs a whole script and returns its transcript.
pub fn run_script<B: Backend + ?Sized>(
    backend: &B,
    presets: &[DomainPreset],
    script: &Script,
) -> Result<String, RunError> {
    let preset = presets
        .iter()
        .find(|p| p.name == script.preset)
        .ok_or_else(|| RunError::UnknownPreset(script.preset.clone()))?;
    let mut dialogue = Dialogue::open(backend, preset)?;
    let mut out = format!("# preset: {}\n", preset.name);
    for (line, step) in &script.steps {
        if dialogue.is_closed() {
            return Err(RunError::AfterClose(*line));
        }
        let turn = dialogue.step(step)?;
        out.push_str(&format!("== turn {}\n", turn.turn));
        out.push_str(&format!("USER: {step}\n"));
        out.push_str("AGENDA:\n");
        out.push_str(&turn.agenda_text);
        out.push_str(&format!("SYSTEM: {}\n", turn.system_text));
    }
    Ok(out)
}

/// Unified diff of `expected` against `actual`, empty when equal.
pub fn golden_diff(expected: &str, actual: &str) -> String {
    if expected == actual {
        return String::new();
    }
    similar::TextDiff::from_lines(expected, actual)
        .unified_diff()
        .context_radius(3)
        .header("golden", "actual")
        .to_string()
}
