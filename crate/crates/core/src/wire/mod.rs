//! Wire documents and the transport-independent session service.

mod documents;
mod service;

use thiserror::Error;

use crate::presenter::TurnError;

pub use documents::{
    decode, encode, parse_semantics, AgendaDocument, SnippetDocument, UserInputDocument,
    WorkspaceDocument, WorkspaceEntry,
};
pub use service::{ConverseOutcome, SessionService, TurnGuard};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ServiceError {
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("unknown session {0:?}")]
    UnknownSession(String),
    #[error("invalid snippet at index {index}: {reason}")]
    InvalidSnippet { index: usize, reason: String },
    #[error("malformed document: {reason}")]
    MalformedDocument { reason: String },
    #[error("invalid user input: {0}")]
    InvalidUserInput(String),
    #[error("session is closed")]
    SessionClosed,
    #[error("a turn is already in progress for this session")]
    TurnInProgress,
}

impl ServiceError {
    /// HTTP status for the error.
    pub fn status(&self) -> u16 {
        match self {
            ServiceError::InvalidSnippet { .. }
            | ServiceError::MalformedDocument { .. }
            | ServiceError::InvalidUserInput(_) => 400,
            ServiceError::UnknownPreset(_) | ServiceError::UnknownSession(_) => 404,
            ServiceError::SessionClosed => 409,
            ServiceError::TurnInProgress => 429,
        }
    }

    /// Stable machine-readable name.
    pub fn kind(&self) -> &'static str {
        match self {
            ServiceError::UnknownPreset(_) => "UnknownPreset",
            ServiceError::UnknownSession(_) => "UnknownSession",
            ServiceError::InvalidSnippet { .. } => "InvalidSnippet",
            ServiceError::MalformedDocument { .. } => "MalformedDocument",
            ServiceError::InvalidUserInput(_) => "InvalidUserInput",
            ServiceError::SessionClosed => "SessionClosed",
            ServiceError::TurnInProgress => "TurnInProgress",
        }
    }
}

impl From<TurnError> for ServiceError {
    fn from(e: TurnError) -> Self {
        match e {
            TurnError::SessionClosed => ServiceError::SessionClosed,
            TurnError::InvalidUserInput(msg) => ServiceError::InvalidUserInput(msg),
        }
    }
}
