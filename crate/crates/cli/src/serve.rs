//! HTTP session API: one shared reduction session driven by redex ids.
//!
//! Every handler takes the session lock for the whole request, so steps are
//! applied one at a time in arrival order.

use std::sync::{Arc, Mutex};

use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use ndgraph::engine::{EngineError, Redex, Session, Trace};
use ndgraph::graph::{NodeId, PortGraph};
use ndgraph::io::content_hash;
use ndgraph::rules::Mode;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::commands::catalogue;
use crate::input::{Input, InputError, Kind};

pub type Shared = Arc<Mutex<Session>>;

/// A new, empty session in global mode.
pub fn new_session() -> Shared {
    Arc::new(Mutex::new(Session::new(PortGraph::empty(), catalogue(Mode::Global))))
}

pub fn router(session: Shared) -> Router {
    Router::new()
        .route("/graph", get(graph))
        .route("/redexes", get(redexes))
        .route("/step", post(step))
        .route("/undo", post(undo))
        .route("/load", post(load))
        .route("/trace", get(trace))
        .with_state(session)
}

pub async fn serve(port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    println!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(new_session())).await
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RedexDoc {
    pub id: String,
    pub rule: String,
    pub nodes: Vec<NodeId>,
}

impl From<&Redex> for RedexDoc {
    fn from(r: &Redex) -> Self {
        RedexDoc { id: r.id.clone(), rule: r.rule.clone(), nodes: r.nodes.clone() }
    }
}

/// The state after a change: graph, what can fire next, and the position
/// in the trace.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Snapshot {
    pub graph: PortGraph,
    pub redexes: Vec<RedexDoc>,
    pub steps: usize,
    pub hash: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepRequest {
    pub redex_id: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LoadRequest {
    pub kind: Kind,
    pub text: String,
    #[serde(default)]
    pub mode: Option<String>,
}

/// Error body: a stable code and a human-readable message.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ErrorDoc {
    pub code: String,
    pub message: String,
}

pub struct ApiError(ErrorDoc);

impl ApiError {
    fn new(code: &str, message: impl ToString) -> Self {
        ApiError(ErrorDoc { code: code.to_string(), message: message.to_string() })
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (StatusCode::BAD_REQUEST, Json(self.0)).into_response()
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        ApiError::new(e.code(), e)
    }
}

impl From<InputError> for ApiError {
    fn from(e: InputError) -> Self {
        ApiError::new(e.code(), e)
    }
}

/// Bodies are parsed by hand so that malformed JSON is a 400 like every
/// other error.
fn body<T: DeserializeOwned>(text: &str) -> Result<T, ApiError> {
    serde_json::from_str(text).map_err(|e| ApiError::new("bad_request", e))
}

fn lock(s: &Shared) -> std::sync::MutexGuard<'_, Session> {
    // A panic while holding the lock leaves the session as it was before
    // the failed request, since sessions only change on success.
    s.lock().unwrap_or_else(|e| e.into_inner())
}

fn snapshot(s: &Session) -> Snapshot {
    Snapshot {
        graph: s.graph().clone(),
        redexes: s.redexes().iter().map(RedexDoc::from).collect(),
        steps: s.steps(),
        hash: content_hash(s.graph()),
    }
}

async fn graph(State(s): State<Shared>) -> Json<PortGraph> {
    Json(lock(&s).graph().clone())
}

async fn redexes(State(s): State<Shared>) -> Json<Vec<RedexDoc>> {
    Json(lock(&s).redexes().iter().map(RedexDoc::from).collect())
}

async fn step(State(s): State<Shared>, text: String) -> Result<Json<Snapshot>, ApiError> {
    let req: StepRequest = body(&text)?;
    let mut session = lock(&s);
    session.step(&req.redex_id)?;
    Ok(Json(snapshot(&session)))
}

async fn undo(State(s): State<Shared>) -> Result<Json<Snapshot>, ApiError> {
    let mut session = lock(&s);
    session.undo()?;
    Ok(Json(snapshot(&session)))
}

async fn load(State(s): State<Shared>, text: String) -> Result<Json<Snapshot>, ApiError> {
    let req: LoadRequest = body(&text)?;
    let mode: Mode = match &req.mode {
        Some(m) => m.parse().map_err(|e| ApiError::new("bad_request", e))?,
        None => Mode::Global,
    };
    let g = Input::parse(req.kind, &req.text)?.to_graph()?;
    let mut session = lock(&s);
    *session = Session::new(g, catalogue(mode));
    Ok(Json(snapshot(&session)))
}

async fn trace(State(s): State<Shared>) -> Json<Trace> {
    Json(lock(&s).trace().clone())
}
