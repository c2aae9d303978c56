//! HTTP and WebSocket sessions for the polydots engine.
//!
//! | route | effect |
//! |---|---|
//! | `POST /games` | create a session, returns `{id, state}` |
//! | `GET /games/{id}` | state snapshot |
//! | `GET /games/{id}/legal` | legal moves as `[{from, to}]` |
//! | `POST /games/{id}/moves` | play `{from, to}`, returns `{outcome, events, state}` |
//! | `GET /games/{id}/classify` | shape labels for every open region |
//! | `GET /games/{id}/record` | downloadable game record |
//! | `GET /games/{id}/events` | WebSocket stream of move events |
//!
//! Every mutation of a session happens under that session's lock, and AI
//! replies are computed inside the same critical section as the human move
//! that triggered them, so clients never observe an AI halfway through a
//! turn. Sessions where both seats are AIs are driven by a background task,
//! one complete turn at a time.
//!
//! The event stream accepts `?since=N` and first replays every logged
//! event with a larger sequence number, so a client that fetched a
//! snapshot can subscribe without missing moves.

pub mod session;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex, RwLock};
use std::time::Duration;

use axum::extract::rejection::JsonRejection;
use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use polydots::engine::{BoardSpec, Variant};
use polydots::geometry::{LatticePoint, Segment};
use polydots::record::GameRecord;
use polydots::shapes::{classify_eye, classify_reduction, Region};
use serde::Deserialize;
use serde_json::{json, Value};
use tokio::sync::broadcast;
use uuid::Uuid;

pub use session::{Event, Rejection, Seat, Session, StateView};

#[derive(Debug, Clone)]
pub struct ServerConfig {
    /// Pause between turns when two AIs play each other, so watchers can
    /// follow the game.
    pub ai_turn_delay: Duration,
    /// Largest accepted board side.
    pub max_board_side: u32,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig { ai_turn_delay: Duration::from_millis(300), max_board_side: 12 }
    }
}

struct Handle {
    session: Mutex<Session>,
    events: broadcast::Sender<Event>,
}

impl Handle {
    fn lock(&self) -> std::sync::MutexGuard<'_, Session> {
        self.session.lock().unwrap_or_else(|e| e.into_inner())
    }

    /// Sends a batch to subscribers. Called with the session lock held so
    /// batches from different mutations cannot interleave.
    fn publish(&self, batch: &[Event]) {
        for e in batch {
            // No subscribers is fine.
            let _ = self.events.send(e.clone());
        }
    }
}

/// Shared server state: the session table and configuration.
#[derive(Clone, Default)]
pub struct AppState {
    sessions: Arc<RwLock<HashMap<String, Arc<Handle>>>>,
    config: Arc<ServerConfig>,
}

impl AppState {
    pub fn new(config: ServerConfig) -> AppState {
        AppState { sessions: Arc::default(), config: Arc::new(config) }
    }

    fn get(&self, id: &str) -> Result<Arc<Handle>, ApiError> {
        let table = self.sessions.read().unwrap_or_else(|e| e.into_inner());
        table.get(id).cloned().ok_or(ApiError::NotFound)
    }

    /// Runs `f` on the session's event log and state, for tests and tools.
    pub fn with_session<T>(&self, id: &str, f: impl FnOnce(&Session) -> T) -> Option<T> {
        let h = self.get(id).ok()?;
        let guard = h.lock();
        Some(f(&guard))
    }
}

enum ApiError {
    BadRequest(String),
    NotFound,
    Rejected(Rejection),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        match self {
            ApiError::BadRequest(msg) => (StatusCode::BAD_REQUEST, Json(json!({"error": msg}))).into_response(),
            ApiError::NotFound => (StatusCode::NOT_FOUND, Json(json!({"error": "no such game"}))).into_response(),
            ApiError::Rejected(r) => (
                StatusCode::UNPROCESSABLE_ENTITY,
                Json(json!({"error": "illegal-move", "reason": r.token(), "message": r.message()})),
            )
                .into_response(),
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        ApiError::BadRequest(r.body_text())
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game))
        .route("/games/{id}/legal", get(legal_moves))
        .route("/games/{id}/moves", post(post_move))
        .route("/games/{id}/classify", get(classify))
        .route("/games/{id}/record", get(record))
        .route("/games/{id}/events", get(events))
        .with_state(state)
}

/// Binds and serves until the process is stopped.
pub async fn serve(addr: SocketAddr, config: ServerConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(AppState::new(config))).await
}

#[derive(Deserialize)]
struct BoardParams {
    width: u32,
    height: u32,
}

#[derive(Deserialize)]
struct SeatParams {
    p1: String,
    p2: String,
}

#[derive(Deserialize)]
struct CreateParams {
    board: BoardParams,
    variant: String,
    seats: SeatParams,
    seed: Option<u64>,
}

async fn create_game(
    State(app): State<AppState>,
    body: Result<Json<CreateParams>, JsonRejection>,
) -> Result<Response, ApiError> {
    let Json(p) = body?;
    let board = BoardSpec::new(p.board.width, p.board.height).map_err(|e| ApiError::BadRequest(e.to_string()))?;
    let max = app.config.max_board_side;
    if p.board.width > max || p.board.height > max {
        return Err(ApiError::BadRequest(format!("board sides are limited to {max}")));
    }
    let variant: Variant = p.variant.parse().map_err(ApiError::BadRequest)?;
    let seats = [
        p.seats.p1.parse::<Seat>().map_err(ApiError::BadRequest)?,
        p.seats.p2.parse::<Seat>().map_err(ApiError::BadRequest)?,
    ];
    let id = Uuid::new_v4().simple().to_string();
    let seed = p.seed.unwrap_or_else(|| Uuid::new_v4().as_u64_pair().0);
    let session = Session::new(id.clone(), board, variant, seats, seed);
    let all_ai = session.all_ai();
    let (tx, _) = broadcast::channel(4096);
    let handle = Arc::new(Handle { session: Mutex::new(session), events: tx });
    app.sessions.write().unwrap_or_else(|e| e.into_inner()).insert(id.clone(), handle.clone());

    let view = if all_ai {
        let view = handle.lock().view();
        tokio::spawn(drive_ai_game(handle, app.config.ai_turn_delay));
        view
    } else {
        // An AI in the first seat opens before the human sees the board.
        let h = handle.clone();
        tokio::task::spawn_blocking(move || {
            let mut s = h.lock();
            let batch = s.ai_until_human();
            h.publish(&batch);
            s.view()
        })
        .await
        .expect("AI task")
    };
    Ok((StatusCode::CREATED, Json(json!({"id": id, "state": view}))).into_response())
}

async fn drive_ai_game(handle: Arc<Handle>, delay: Duration) {
    loop {
        let h = handle.clone();
        let more = tokio::task::spawn_blocking(move || {
            let mut s = h.lock();
            let batch = s.ai_turn();
            h.publish(&batch);
            s.ai_to_move()
        })
        .await
        .unwrap_or(false);
        if !more {
            break;
        }
        if !delay.is_zero() {
            tokio::time::sleep(delay).await;
        }
    }
}

async fn get_game(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<StateView>, ApiError> {
    let h = app.get(&id)?;
    let view = h.lock().view();
    Ok(Json(view))
}

async fn legal_moves(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let h = app.get(&id)?;
    let legal = tokio::task::spawn_blocking(move || h.lock().legal()).await.expect("legal task");
    Ok(Json(json!(legal)))
}

#[derive(Deserialize)]
struct MoveParams {
    from: [i32; 2],
    to: [i32; 2],
}

async fn post_move(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<MoveParams>, JsonRejection>,
) -> Result<Json<Value>, ApiError> {
    let h = app.get(&id)?;
    let Json(m) = body?;
    let s = Segment::new(LatticePoint::from(m.from), LatticePoint::from(m.to))
        .map_err(|e| ApiError::BadRequest(format!("invalid move: {e}")))?;
    let (batch, view) = tokio::task::spawn_blocking(move || {
        let mut session = h.lock();
        let batch = session.human_move(s)?;
        h.publish(&batch);
        Ok::<_, Rejection>((batch, session.view()))
    })
    .await
    .expect("move task")
    .map_err(ApiError::Rejected)?;
    Ok(Json(json!({"outcome": batch[0], "events": batch, "state": view})))
}

async fn classify(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let h = app.get(&id)?;
    let labels = tokio::task::spawn_blocking(move || {
        let state = h.lock().state().clone();
        let variant = state.variant();
        let mut out = Vec::new();
        for face in state.unclaimed_faces() {
            let Some(region) = Region::from_face(&state, &face) else { continue };
            let reduction = classify_reduction(&region, variant).map(|r| json!(r)).unwrap_or_else(|e| json!({"error": e.to_string()}));
            let eye = classify_eye(&region, variant)
                .map(|e| json!({"kind": e.kind, "lazy": e.lazy}))
                .unwrap_or_else(|e| json!({"error": e.to_string()}));
            out.push(json!({
                "region": {
                    "outer": face.walk.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
                    "area_halves": region.area().halves(),
                    "boundary_points": region.boundary_points().len(),
                    "interior_points": region.interior_points().len(),
                },
                "reduction": reduction,
                "eye": eye,
            }));
        }
        out
    })
    .await
    .expect("classify task");
    Ok(Json(Value::Array(labels)))
}

async fn record(State(app): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let h = app.get(&id)?;
    let rec = GameRecord::from_state(h.lock().state()).map_err(|e| ApiError::BadRequest(e.to_string()))?;
    let disposition = format!("attachment; filename=\"game-{id}.json\"");
    Ok((
        [(header::CONTENT_TYPE, "application/json".to_string()), (header::CONTENT_DISPOSITION, disposition)],
        rec.to_json(),
    )
        .into_response())
}

#[derive(Deserialize)]
struct EventsQuery {
    since: Option<u64>,
}

async fn events(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<EventsQuery>,
    ws: WebSocketUpgrade,
) -> Result<Response, ApiError> {
    let h = app.get(&id)?;
    Ok(ws.on_upgrade(move |socket| stream_events(socket, h, q.since)))
}

async fn stream_events(mut socket: WebSocket, h: Arc<Handle>, since: Option<u64>) {
    // Subscribing under the session lock means no event falls between the
    // backlog and the live stream.
    let (backlog, mut rx) = {
        let s = h.lock();
        let backlog: Vec<Event> = match since {
            Some(n) => s.events().iter().filter(|e| e.seq > n).cloned().collect(),
            None => Vec::new(),
        };
        (backlog, h.events.subscribe())
    };
    for e in backlog {
        if send_event(&mut socket, &e).await.is_err() {
            return;
        }
    }
    loop {
        tokio::select! {
            msg = rx.recv() => match msg {
                Ok(e) => {
                    if send_event(&mut socket, &e).await.is_err() {
                        return;
                    }
                }
                // A slow client that fell behind must resync from a snapshot.
                Err(broadcast::error::RecvError::Lagged(_)) => {
                    let _ = socket.send(Message::Close(None)).await;
                    return;
                }
                Err(broadcast::error::RecvError::Closed) => return,
            },
            incoming = socket.recv() => match incoming {
                Some(Ok(Message::Close(_))) | None | Some(Err(_)) => return,
                Some(Ok(_)) => {}
            },
        }
    }
}

async fn send_event(socket: &mut WebSocket, e: &Event) -> Result<(), axum::Error> {
    let text = serde_json::to_string(e).expect("events serialise");
    socket.send(Message::Text(text.into())).await
}
