//! HTTP/1.1 endpoints over [`SessionService`].
//!
//! | method | path                          | body                    | reply               |
//! |--------|-------------------------------|-------------------------|---------------------|
//! | POST   | `/sessions`                   | `{"preset": name}`      | `{"session_id": id}`|
//! | POST   | `/sessions/{id}/snippets`     | array of snippet docs   | `{"agenda_ids": []}`|
//! | POST   | `/sessions/{id}/turn`         | user input doc or empty | agenda document     |
//! | POST   | `/sessions/{id}/utterance`    | `{"text": str or null}` | converse outcome    |
//! | GET    | `/sessions/{id}/workspace`    |                         | workspace document  |
//! | GET    | `/healthz`                    |                         | `{"status": "ok"}`  |
//!
//! Errors reply with `{"error": kind, "message": text}`: validation failures
//! are 400, unknown ids 404, a closed session 409 and a concurrent turn 429.

use std::io;
use std::net::SocketAddr;
use std::sync::Arc;
use std::thread::JoinHandle;

use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::{Deserialize, Serialize};
use tokio::net::TcpListener;
use tokio::sync::oneshot;

use owlspeak_core::wire::{decode, encode, ServiceError, SessionService, SnippetDocument, UserInputDocument};

type Shared = Arc<SessionService>;

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSession {
    #[serde(default)]
    pub preset: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SessionCreated {
    pub session_id: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SnippetsAccepted {
    pub agenda_ids: Vec<String>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Utterance {
    #[serde(default)]
    pub text: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
}

struct ApiError(ServiceError);

impl From<ServiceError> for ApiError {
    fn from(e: ServiceError) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.0.status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        let body = ErrorBody {
            error: self.0.kind().to_string(),
            message: self.0.to_string(),
        };
        (status, json_text(encode(&body))).into_response()
    }
}

fn json_text(text: String) -> impl IntoResponse {
    ([(header::CONTENT_TYPE, "application/json")], text)
}

fn ok<T: Serialize>(doc: &T) -> Response {
    json_text(encode(doc)).into_response()
}

/// Empty bodies and `null` stand for "no document".
fn decode_optional<T: serde::de::DeserializeOwned>(body: &str) -> Result<Option<T>, ServiceError> {
    if body.trim().is_empty() {
        return Ok(None);
    }
    decode::<Option<T>>(body)
}

async fn healthz() -> Response {
    ok(&serde_json::json!({ "status": "ok" }))
}

async fn create_session(State(svc): State<Shared>, body: String) -> Result<Response, ApiError> {
    let req: CreateSession = decode_optional(&body)?.unwrap_or_default();
    let session_id = svc.post_session(&req.preset)?;
    Ok((StatusCode::CREATED, ok(&SessionCreated { session_id })).into_response())
}

async fn post_snippets(
    State(svc): State<Shared>,
    Path(id): Path<String>,
    body: String,
) -> Result<Response, ApiError> {
    let docs: Vec<SnippetDocument> = decode(&body)?;
    let agenda_ids = svc.post_snippets(&id, &docs)?;
    Ok(ok(&SnippetsAccepted { agenda_ids }))
}

async fn post_turn(
    State(svc): State<Shared>,
    Path(id): Path<String>,
    body: String,
) -> Result<Response, ApiError> {
    let input: Option<UserInputDocument> = decode_optional(&body)?;
    let doc = svc.post_turn(&id, input.as_ref())?;
    Ok(ok(&doc))
}

async fn post_utterance(
    State(svc): State<Shared>,
    Path(id): Path<String>,
    body: String,
) -> Result<Response, ApiError> {
    let req: Utterance = decode_optional(&body)?.unwrap_or_default();
    let outcome = svc.converse(&id, req.text.as_deref())?;
    Ok(ok(&outcome))
}

async fn get_workspace(State(svc): State<Shared>, Path(id): Path<String>) -> Result<Response, ApiError> {
    Ok(ok(&svc.get_workspace(&id)?))
}

pub fn router(service: Shared) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}/snippets", post(post_snippets))
        .route("/sessions/{id}/turn", post(post_turn))
        .route("/sessions/{id}/utterance", post(post_utterance))
        .route("/sessions/{id}/workspace", get(get_workspace))
        .with_state(service)
}

/// Serves until the listener fails.
pub async fn serve(listener: TcpListener, service: Shared) -> io::Result<()> {
    axum::serve(listener, router(service)).await
}

/// A server running on its own runtime thread; stops when dropped.
pub struct BackgroundServer {
    addr: SocketAddr,
    shutdown: Option<oneshot::Sender<()>>,
    thread: Option<JoinHandle<io::Result<()>>>,
}

impl BackgroundServer {
    /// Binds `addr` (port 0 picks a free port) and starts serving.
    pub fn start(addr: SocketAddr, service: Shared) -> io::Result<Self> {
        let runtime = tokio::runtime::Builder::new_multi_thread()
            .worker_threads(2)
            .enable_all()
            .build()?;
        let std_listener = std::net::TcpListener::bind(addr)?;
        std_listener.set_nonblocking(true)?;
        let addr = std_listener.local_addr()?;
        let (tx, rx) = oneshot::channel::<()>();
        let thread = std::thread::spawn(move || {
            runtime.block_on(async move {
                let listener = TcpListener::from_std(std_listener)?;
                axum::serve(listener, router(service))
                    .with_graceful_shutdown(async {
                        let _ = rx.await;
                    })
                    .await
            })
        });
        Ok(BackgroundServer {
            addr,
            shutdown: Some(tx),
            thread: Some(thread),
        })
    }

    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn base_url(&self) -> String {
        format!("http://{}", self.addr)
    }
}

impl Drop for BackgroundServer {
    fn drop(&mut self) {
        if let Some(tx) = self.shutdown.take() {
            let _ = tx.send(());
        }
        if let Some(thread) = self.thread.take() {
            let _ = thread.join();
        }
    }
}
