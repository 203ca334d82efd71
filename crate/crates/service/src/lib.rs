//! HTTP+JSON match server.
//!
//! Routes:
//!
//! | method | path | body / query |
//! |---|---|---|
//! | POST | `/match` | `{size?, diagram?, max_turns?}` |
//! | POST | `/match/{id}/join` | `{token}` |
//! | POST | `/match/{id}/move` | `{token, turn, move}` |
//! | GET | `/match/{id}/state` | `?token=` (omit for spectators) |
//! | POST | `/match/{id}/resign` | `{token}` |
//! | GET | `/match/{id}/events` | `?since=&timeout_ms=&token=` |
//!
//! `events` is a long-poll: it answers as soon as there are resolved turns
//! past `since` or any other change to the match, or when the timeout runs out.

pub mod error;
pub mod session;
pub mod store;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use sgo_core::{parse_diagram, Color, GameConfig, Move};

pub use error::ServiceError;
pub use session::{Committed, MatchSession, PublicState, ResolvedTurn, Status, SubmitOutcome, Viewer};
pub use store::{Created, MatchStore};

pub const DEFAULT_POLL_MS: u64 = 25_000;
pub const MAX_POLL_MS: u64 = 60_000;

pub type AppState = Arc<MatchStore>;

#[derive(Debug, Default, Deserialize, Serialize)]
pub struct CreateRequest {
    pub size: Option<usize>,
    /// A board in fixture notation to start from. Overrides `size`.
    pub diagram: Option<String>,
    pub max_turns: Option<u32>,
}

#[derive(Debug, Deserialize, Serialize)]
pub struct TokenRequest {
    pub token: String,
}

#[derive(Debug, Deserialize, Serialize)]
pub struct MoveRequest {
    pub token: String,
    pub turn: u32,
    #[serde(rename = "move")]
    pub mv: String,
}

#[derive(Debug, Deserialize, Serialize)]
pub struct JoinResponse {
    pub color: Color,
    pub state: PublicState,
}

#[derive(Debug, Default, Deserialize)]
pub struct StateQuery {
    pub token: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
pub struct EventsQuery {
    pub token: Option<String>,
    #[serde(default)]
    pub since: usize,
    pub timeout_ms: Option<u64>,
}

#[derive(Debug, Deserialize, Serialize)]
pub struct EventsResponse {
    pub turns: Vec<ResolvedTurn>,
    /// Pass this back as `since` on the next poll.
    pub next: usize,
    pub status: Status,
    pub committed: Committed,
}

fn body<T>(r: Result<Json<T>, JsonRejection>) -> Result<T, ServiceError> {
    r.map(|Json(v)| v).map_err(|e| ServiceError::BadRequest(e.body_text()))
}

fn query<T>(r: Result<Query<T>, QueryRejection>) -> Result<T, ServiceError> {
    r.map(|Query(v)| v).map_err(|e| ServiceError::BadRequest(e.body_text()))
}

pub fn config_from_request(req: &CreateRequest) -> Result<GameConfig, ServiceError> {
    let mut cfg = match &req.diagram {
        Some(text) => {
            let board = parse_diagram(text).map_err(|e| ServiceError::InvalidConfig(e.to_string()))?;
            board.check_registry().map_err(|e| ServiceError::InvalidConfig(e.to_string()))?;
            GameConfig::from_board(&board)
        }
        None => GameConfig::new(req.size.unwrap_or(sgo_core::game::DEFAULT_SIZE)),
    };
    cfg.max_turns = req.max_turns;
    Ok(cfg)
}

async fn create(
    State(store): State<AppState>,
    req: Result<Json<CreateRequest>, JsonRejection>,
) -> Result<(StatusCode, Json<Created>), ServiceError> {
    let cfg = config_from_request(&body(req)?)?;
    let created = store.create(cfg)?;
    tracing::info!(match_id = %created.match_id, "match created");
    Ok((StatusCode::CREATED, Json(created)))
}

async fn join(
    State(store): State<AppState>,
    Path(id): Path<String>,
    req: Result<Json<TokenRequest>, JsonRejection>,
) -> Result<Json<JoinResponse>, ServiceError> {
    let req = body(req)?;
    let color = store.join(&id, &req.token)?;
    let state = store.get(&id)?.lock().view(color.into());
    Ok(Json(JoinResponse { color, state }))
}

async fn submit(
    State(store): State<AppState>,
    Path(id): Path<String>,
    req: Result<Json<MoveRequest>, JsonRejection>,
) -> Result<Json<SubmitOutcome>, ServiceError> {
    let req = body(req)?;
    let mv: Move = req.mv.parse().map_err(|e: sgo_core::CoordError| ServiceError::InvalidMove(e.to_string()))?;
    Ok(Json(store.submit(&id, &req.token, mv, req.turn)?))
}

async fn state(
    State(store): State<AppState>,
    Path(id): Path<String>,
    q: Result<Query<StateQuery>, QueryRejection>,
) -> Result<Json<PublicState>, ServiceError> {
    let q = query(q)?;
    let entry = store.get(&id)?;
    let session = entry.lock();
    let viewer = session.viewer(q.token.as_deref())?;
    Ok(Json(session.view(viewer)))
}

async fn resign(
    State(store): State<AppState>,
    Path(id): Path<String>,
    req: Result<Json<TokenRequest>, JsonRejection>,
) -> Result<Json<PublicState>, ServiceError> {
    let req = body(req)?;
    let color = store.resign(&id, &req.token)?;
    Ok(Json(store.get(&id)?.lock().view(color.into())))
}

async fn events(
    State(store): State<AppState>,
    Path(id): Path<String>,
    q: Result<Query<EventsQuery>, QueryRejection>,
) -> Result<Json<EventsResponse>, ServiceError> {
    let q = query(q)?;
    let entry = store.get(&id)?;
    let mut rx = entry.subscribe();
    let snapshot = |since: usize| {
        let s = entry.lock();
        EventsResponse {
            turns: s.turns_since(since),
            next: s.game.history.len(),
            status: s.status.clone(),
            committed: s.view(Viewer::Spectator).committed,
        }
    };
    // Authenticate up front so a bad token fails fast.
    entry.lock().viewer(q.token.as_deref())?;

    rx.borrow_and_update();
    let now = snapshot(q.since);
    let done = matches!(now.status, Status::Finished { .. } | Status::Abandoned);
    if !now.turns.is_empty() || done {
        return Ok(Json(now));
    }
    let wait = Duration::from_millis(q.timeout_ms.unwrap_or(DEFAULT_POLL_MS).min(MAX_POLL_MS));
    let _ = tokio::time::timeout(wait, rx.changed()).await;
    Ok(Json(snapshot(q.since)))
}

pub fn router(store: AppState) -> Router {
    Router::new()
        .route("/match", post(create))
        .route("/match/{id}/join", post(join))
        .route("/match/{id}/move", post(submit))
        .route("/match/{id}/state", get(state))
        .route("/match/{id}/resign", post(resign))
        .route("/match/{id}/events", get(events))
        .with_state(store)
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(addr: SocketAddr, data_dir: Option<PathBuf>) -> Result<(), ServiceError> {
    let store = match data_dir {
        Some(dir) => MatchStore::open(dir)?,
        None => MatchStore::in_memory(),
    };
    tracing::info!(matches = store.len(), "store ready");
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(Arc::new(store))).await?;
    Ok(())
}
