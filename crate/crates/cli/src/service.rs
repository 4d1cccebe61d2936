//! HTTP/JSON API over in-memory design sessions.
//!
//! | method | path | |
//! |---|---|---|
//! | POST | `/sessions` | create from two classical codes, a reference code, a bundle or a saved session |
//! | GET | `/sessions/{id}` | graph, tags, history and diagnostics |
//! | POST | `/sessions/{id}/edges` | toggle one physical edge |
//! | POST | `/sessions/{id}/undo` | revert the last edit |
//! | GET | `/sessions/{id}/export?format=bundle\|session\|dot\|factor-dot` | |
//! | POST | `/sessions/{id}/search` | suggest cross-checks for a target distance |
//! | POST | `/sessions/{id}/montecarlo` | start a background estimate |
//! | GET | `/jobs/{id}` | poll a background estimate |

use std::collections::{BTreeMap, HashMap};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use cpc_core::analysis::{monte_carlo, LookupDecoder, MonteCarloResult};
use cpc_core::builder::{search_cross_checks, DesignSession, EditRecord, SearchReport, DEFAULT_SEARCH_BUDGET};
use cpc_core::dot::{factor_graph_dot, operational_dot};
use cpc_core::{reference, ClassicalCode, EdgeKind, Execution, OperationalGraph, Qubit};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bundle::CodeBundle;
use crate::diagnostics::Diagnostics;
use crate::error::{CliError, CliResult};

/// Largest shot count accepted by the Monte Carlo endpoint.
pub const MAX_JOB_SHOTS: u64 = 100_000_000;

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    kind: &'static str,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, kind: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            kind,
            message: message.into(),
        }
    }

    fn not_found(what: &str, id: u64) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "not_found", format!("no {what} with id {id}"))
    }

    fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }
}

impl From<cpc_core::Error> for ApiError {
    fn from(e: cpc_core::Error) -> Self {
        use cpc_core::Error as E;
        let (status, kind) = match &e {
            E::Role(_) => (StatusCode::UNPROCESSABLE_ENTITY, "role"),
            E::Endpoint(_) => (StatusCode::UNPROCESSABLE_ENTITY, "endpoint"),
            E::IncompatibleCodes(_) => (StatusCode::UNPROCESSABLE_ENTITY, "incompatible_codes"),
            E::Range(_) => (StatusCode::UNPROCESSABLE_ENTITY, "range"),
            E::TooLarge(_) => (StatusCode::UNPROCESSABLE_ENTITY, "too_large"),
            E::InvalidState(_) | E::Inconsistent(_) => (StatusCode::UNPROCESSABLE_ENTITY, "invalid"),
            E::Parse(_) | E::Shape(_) | E::UnknownCode(_) => (StatusCode::BAD_REQUEST, "bad_request"),
        };
        ApiError::new(status, kind, e.to_string())
    }
}

impl From<CliError> for ApiError {
    fn from(e: CliError) -> Self {
        match e {
            CliError::Core(core) => core.into(),
            other => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid", other.to_string()),
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::bad_request(e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message, "kind": self.kind }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum Job {
    Running { p: f64, shots: u64, seed: u64 },
    Done { result: MonteCarloResult },
    Failed { error: String },
}

#[derive(Default)]
pub struct AppState {
    sessions: Mutex<BTreeMap<u64, DesignSession>>,
    jobs: Mutex<HashMap<u64, Job>>,
    next_id: AtomicU64,
    snapshot: Option<PathBuf>,
}

impl AppState {
    pub fn new(snapshot: Option<PathBuf>) -> CliResult<Self> {
        let sessions: BTreeMap<u64, DesignSession> = match &snapshot {
            Some(path) if path.exists() => crate::input::read_json(path)?,
            _ => BTreeMap::new(),
        };
        let next = sessions.keys().next_back().map_or(1, |k| k + 1);
        Ok(AppState {
            sessions: Mutex::new(sessions),
            jobs: Mutex::new(HashMap::new()),
            next_id: AtomicU64::new(next),
            snapshot,
        })
    }

    fn fresh_id(&self) -> u64 {
        self.next_id.fetch_add(1, Ordering::Relaxed)
    }

    fn session(&self, id: u64) -> ApiResult<DesignSession> {
        self.sessions
            .lock()
            .expect("session lock")
            .get(&id)
            .cloned()
            .ok_or_else(|| ApiError::not_found("session", id))
    }

    /// Applies `edit` under the lock; the session is only replaced on success.
    fn update<T>(&self, id: u64, edit: impl FnOnce(&mut DesignSession) -> ApiResult<T>) -> ApiResult<(T, DesignSession)> {
        let mut sessions = self.sessions.lock().expect("session lock");
        let current = sessions.get(&id).ok_or_else(|| ApiError::not_found("session", id))?;
        let mut next = current.clone();
        let value = edit(&mut next)?;
        sessions.insert(id, next.clone());
        self.save(&sessions);
        Ok((value, next))
    }

    fn insert(&self, session: DesignSession) -> u64 {
        let id = self.fresh_id();
        let mut sessions = self.sessions.lock().expect("session lock");
        sessions.insert(id, session);
        self.save(&sessions);
        id
    }

    fn save(&self, sessions: &BTreeMap<u64, DesignSession>) {
        let Some(path) = &self.snapshot else { return };
        let tmp = path.with_extension("tmp");
        let text = serde_json::to_string(sessions).expect("sessions serialize");
        if let Err(e) = std::fs::write(&tmp, text).and_then(|_| std::fs::rename(&tmp, path)) {
            eprintln!("warning: could not write snapshot {}: {e}", path.display());
        }
    }
}

pub type Shared = Arc<AppState>;

pub fn router(state: Shared) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/edges", post(toggle_edge))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/export", get(export))
        .route("/sessions/{id}/search", post(search))
        .route("/sessions/{id}/montecarlo", post(start_monte_carlo))
        .route("/jobs/{id}", get(get_job))
        .fallback(|| async { ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such endpoint") })
        .with_state(state)
}

pub async fn serve(host: String, port: u16, snapshot: Option<PathBuf>) -> CliResult<()> {
    let state = Arc::new(AppState::new(snapshot)?);
    let addr: SocketAddr = format!("{host}:{port}")
        .parse()
        .map_err(|_| CliError::Usage(format!("bad listen address {host}:{port}")))?;
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|e| CliError::io(addr, e))?;
    eprintln!("listening on http://{addr}");
    axum::serve(listener, router(state)).await.map_err(|e| CliError::io(addr, e))
}

#[derive(Serialize)]
struct SessionView {
    id: u64,
    name: String,
    graph: OperationalGraph,
    tags: cpc_core::analysis::PartitionTags,
    history: Vec<EditRecord>,
    target_distance: Option<usize>,
    diagnostics: Diagnostics,
}

/// Serialized up front so a failure is a 500, not a half-written 201.
fn view(id: u64, s: &DesignSession) -> ApiResult<Json<Value>> {
    let v = SessionView {
        id,
        name: s.name().to_string(),
        graph: s.graph().clone(),
        tags: s.tags().clone(),
        history: s.history().to_vec(),
        target_distance: s.target_distance(),
        diagnostics: Diagnostics::compute(s)?,
    };
    serde_json::to_value(v)
        .map(Json)
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CodeSpec {
    Builtin(String),
    Inline(ClassicalCode),
}

impl CodeSpec {
    fn resolve(self) -> ApiResult<ClassicalCode> {
        match self {
            CodeSpec::Builtin(name) => Ok(ClassicalCode::builtin(&name)?),
            CodeSpec::Inline(code) => Ok(code),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateSession {
    bit: Option<CodeSpec>,
    phase: Option<CodeSpec>,
    reference: Option<String>,
    bundle: Option<Box<CodeBundle>>,
    session: Option<Box<DesignSession>>,
    name: Option<String>,
    target_d: Option<usize>,
}

async fn create_session(
    State(state): State<Shared>,
    body: Result<Json<CreateSession>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<Value>)> {
    let Json(req) = body?;
    let mut session = match (req.bit, req.phase, req.reference, req.bundle, req.session) {
        (Some(bit), Some(phase), None, None, None) => DesignSession::combine(&bit.resolve()?, &phase.resolve()?)?,
        (None, None, Some(name), None, None) => reference::by_name(&name)?,
        (None, None, None, Some(bundle), None) => {
            bundle.verify()?;
            bundle.session()?
        }
        (None, None, None, None, Some(saved)) => *saved,
        _ => {
            return Err(ApiError::bad_request(
                "give exactly one of: bit and phase codes, a reference name, a bundle, or a session",
            ))
        }
    };
    if let Some(name) = req.name {
        session.set_name(name);
    }
    if req.target_d.is_some() {
        session.set_target_distance(req.target_d);
    }
    let id = state.insert(session.clone());
    Ok((StatusCode::CREATED, view(id, &session)?))
}

async fn get_session(State(state): State<Shared>, Path(id): Path<u64>) -> ApiResult<Json<Value>> {
    view(id, &state.session(id)?)
}

#[derive(Deserialize)]
struct EdgeRequest {
    kind: EdgeKind,
    a: String,
    b: String,
    /// Desired state. Absent means toggle.
    present: Option<bool>,
}

fn has_edge(g: &OperationalGraph, kind: EdgeKind, a: Qubit, b: Qubit) -> bool {
    let data_parity = match (a, b) {
        (Qubit::Data(d), Qubit::Parity(p)) | (Qubit::Parity(p), Qubit::Data(d)) => Some((d, p)),
        _ => None,
    };
    match (kind, a, b) {
        (EdgeKind::Bit, ..) => data_parity.is_some_and(|e| g.bit_edges().contains(&e)),
        (EdgeKind::Phase, ..) => data_parity.is_some_and(|e| g.phase_edges().contains(&e)),
        (EdgeKind::Cross, Qubit::Parity(x), Qubit::Parity(y)) => g.cross_edges().contains(&(x.min(y), x.max(y))),
        _ => false,
    }
}

async fn toggle_edge(
    State(state): State<Shared>,
    Path(id): Path<u64>,
    body: Result<Json<EdgeRequest>, JsonRejection>,
) -> ApiResult<Json<Value>> {
    let Json(req) = body?;
    let a: Qubit = req.a.parse()?;
    let b: Qubit = req.b.parse()?;
    let ((), session) = state.update(id, |s| {
        if req.present.is_some_and(|want| want == has_edge(s.graph(), req.kind, a, b)) {
            return Ok(());
        }
        Ok(s.toggle_edge(req.kind, a, b)?)
    })?;
    view(id, &session)
}

async fn undo(State(state): State<Shared>, Path(id): Path<u64>) -> ApiResult<Json<Value>> {
    let (_, session) = state.update(id, |s| {
        s.undo()
            .ok_or_else(|| ApiError::new(StatusCode::CONFLICT, "empty_history", "nothing to undo"))
    })?;
    view(id, &session)
}

#[derive(Deserialize)]
struct ExportQuery {
    format: Option<String>,
}

async fn export(
    State(state): State<Shared>,
    Path(id): Path<u64>,
    Query(q): Query<ExportQuery>,
) -> ApiResult<Response> {
    let s = state.session(id)?;
    let dot = |text: String| ([(header::CONTENT_TYPE, "text/vnd.graphviz")], text).into_response();
    Ok(match q.format.as_deref().unwrap_or("bundle") {
        "bundle" => Json(CodeBundle::from_session(&s)?).into_response(),
        "session" => Json(s).into_response(),
        "dot" => dot(operational_dot(s.graph())),
        "factor-dot" => dot(factor_graph_dot(&s.factor_graph())),
        other => {
            return Err(ApiError::bad_request(format!(
                "unknown export format {other:?}; use bundle, session, dot or factor-dot"
            )))
        }
    })
}

#[derive(Deserialize)]
struct SearchRequest {
    target_d: usize,
    budget: Option<usize>,
}

#[derive(Serialize)]
struct SearchResponse {
    #[serde(flatten)]
    report: SearchReport,
    /// `pairs` as parity labels, e.g. `["p1", "p2"]`.
    labels: Vec<[String; 2]>,
}

async fn search(
    State(state): State<Shared>,
    Path(id): Path<u64>,
    body: Result<Json<SearchRequest>, JsonRejection>,
) -> ApiResult<Json<SearchResponse>> {
    let Json(req) = body?;
    let s = state.session(id)?;
    let budget = req.budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
    let report = tokio::task::spawn_blocking(move || search_cross_checks(&s, req.target_d, budget, Execution::default()))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))??;
    let labels = report
        .pairs
        .iter()
        .map(|&(a, b)| [Qubit::Parity(a).to_string(), Qubit::Parity(b).to_string()])
        .collect();
    Ok(Json(SearchResponse { report, labels }))
}

#[derive(Deserialize)]
struct MonteCarloRequest {
    p: f64,
    shots: u64,
    #[serde(default)]
    seed: u64,
}

async fn start_monte_carlo(
    State(state): State<Shared>,
    Path(id): Path<u64>,
    body: Result<Json<MonteCarloRequest>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<serde_json::Value>)> {
    let Json(req) = body?;
    let s = state.session(id)?;
    if !(0.0..=1.0).contains(&req.p) {
        return Err(cpc_core::Error::Range(format!("physical error rate {} outside [0, 1]", req.p)).into());
    }
    if req.shots == 0 || req.shots > MAX_JOB_SHOTS {
        return Err(cpc_core::Error::Range(format!("shots must be in 1..={MAX_JOB_SHOTS}")).into());
    }
    let q = s.quantum();
    let decoder = LookupDecoder::build(&q)?;
    let job = state.fresh_id();
    state.jobs.lock().expect("job lock").insert(
        job,
        Job::Running {
            p: req.p,
            shots: req.shots,
            seed: req.seed,
        },
    );
    let worker = state.clone();
    tokio::task::spawn_blocking(move || {
        let outcome = match monte_carlo(&q, &decoder, req.p, req.shots, req.seed, Execution::default()) {
            Ok(result) => Job::Done { result },
            Err(e) => Job::Failed { error: e.to_string() },
        };
        worker.jobs.lock().expect("job lock").insert(job, outcome);
    });
    Ok((
        StatusCode::ACCEPTED,
        Json(json!({ "job": job, "poll": format!("/jobs/{job}") })),
    ))
}

async fn get_job(State(state): State<Shared>, Path(id): Path<u64>) -> ApiResult<Json<Job>> {
    state
        .jobs
        .lock()
        .expect("job lock")
        .get(&id)
        .cloned()
        .map(Json)
        .ok_or_else(|| ApiError::not_found("job", id))
}
