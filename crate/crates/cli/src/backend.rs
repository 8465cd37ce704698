//! The four service calls the runner needs, in-process or over HTTP.

use std::sync::Arc;

use owlspeak_core::wire::{
    decode, encode, AgendaDocument, ServiceError, SessionService, SnippetDocument, UserInputDocument,
};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} ({status}): {message}")]
pub struct BackendError {
    pub status: u16,
    pub kind: String,
    pub message: String,
}

impl From<ServiceError> for BackendError {
    fn from(e: ServiceError) -> Self {
        BackendError {
            status: e.status(),
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

fn transport(message: impl ToString) -> BackendError {
    BackendError {
        status: 0,
        kind: "Transport".into(),
        message: message.to_string(),
    }
}

/// Documents come back as the encoded text so callers see exactly what
/// crossed the boundary.
pub trait Backend {
    fn create_session(&self, preset: &str) -> Result<String, BackendError>;
    fn post_snippets(&self, session_id: &str, docs: &[SnippetDocument]) -> Result<Vec<String>, BackendError>;
    fn post_turn(&self, session_id: &str, input: Option<&UserInputDocument>) -> Result<String, BackendError>;
    fn workspace(&self, session_id: &str) -> Result<String, BackendError>;
}

pub struct InProcess(pub Arc<SessionService>);

impl Backend for InProcess {
    fn create_session(&self, preset: &str) -> Result<String, BackendError> {
        Ok(self.0.post_session(preset)?)
    }

    fn post_snippets(&self, session_id: &str, docs: &[SnippetDocument]) -> Result<Vec<String>, BackendError> {
        Ok(self.0.post_snippets(session_id, docs)?)
    }

    fn post_turn(&self, session_id: &str, input: Option<&UserInputDocument>) -> Result<String, BackendError> {
        Ok(encode(&self.0.post_turn(session_id, input)?))
    }

    fn workspace(&self, session_id: &str) -> Result<String, BackendError> {
        Ok(encode(&self.0.get_workspace(session_id)?))
    }
}

pub struct Http {
    agent: ureq::Agent,
    base: String,
}

impl Http {
    pub fn new(base_url: &str) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .build()
            .into();
        Http {
            agent,
            base: base_url.trim_end_matches('/').to_string(),
        }
    }

    fn finish(&self, response: Result<ureq::http::Response<ureq::Body>, ureq::Error>) -> Result<String, BackendError> {
        let mut response = response.map_err(transport)?;
        let status = response.status().as_u16();
        let body = response.body_mut().read_to_string().map_err(transport)?;
        if (200..300).contains(&status) {
            return Ok(body);
        }
        let parsed: Value = serde_json::from_str(&body).unwrap_or(Value::Null);
        Err(BackendError {
            status,
            kind: parsed["error"].as_str().unwrap_or("Http").to_string(),
            message: parsed["message"].as_str().unwrap_or(&body).to_string(),
        })
    }

    pub fn post(&self, path: &str, body: &str) -> Result<String, BackendError> {
        let response = self
            .agent
            .post(format!("{}{path}", self.base))
            .header("content-type", "application/json")
            .send(body);
        self.finish(response)
    }

    pub fn get(&self, path: &str) -> Result<String, BackendError> {
        self.finish(self.agent.get(format!("{}{path}", self.base)).call())
    }
}

impl Backend for Http {
    fn create_session(&self, preset: &str) -> Result<String, BackendError> {
        let body = self.post("/sessions", &serde_json::json!({ "preset": preset }).to_string())?;
        let v: Value = decode(&body).map_err(transport)?;
        v["session_id"]
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| transport("reply has no session_id"))
    }

    fn post_snippets(&self, session_id: &str, docs: &[SnippetDocument]) -> Result<Vec<String>, BackendError> {
        let body = self.post(&format!("/sessions/{session_id}/snippets"), &encode(&docs))?;
        let v: Value = decode(&body).map_err(transport)?;
        serde_json::from_value(v["agenda_ids"].clone()).map_err(transport)
    }

    fn post_turn(&self, session_id: &str, input: Option<&UserInputDocument>) -> Result<String, BackendError> {
        let body = input.map(encode).unwrap_or_default();
        self.post(&format!("/sessions/{session_id}/turn"), &body)
    }

    fn workspace(&self, session_id: &str) -> Result<String, BackendError> {
        self.get(&format!("/sessions/{session_id}/workspace"))
    }
}

/// Decodes a turn reply.
pub fn agenda(text: &str) -> Result<AgendaDocument, BackendError> {
    decode(text).map_err(transport)
}
