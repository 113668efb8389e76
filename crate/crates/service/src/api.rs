//! HTTP/JSON session service.
//!
//! - `POST /games` `{groups, rounds}` creates a session
//! - `POST /games/:id/challenge` `{group_index}` plays one round (`?verify=false` skips the isomorphism check)
//! - `GET /games/:id` returns the transcript
//! - `GET /games/:id/graph?format=json|dot` returns the current graph

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::cors::{AllowOrigin, Any, CorsLayer};
use vdgame_core::aut::AutError;
use vdgame_core::constructions::ConstructionError;
use vdgame_core::game::{self, build_game, GameConfig, GameError, GameState, Transcript};
use vdgame_core::group::GroupError;

use crate::limits::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SessionStatus {
    AwaitingChallenge,
    Finished,
    Failed,
}

pub struct Session {
    pub id: String,
    pub created: u64,
    pub status: SessionStatus,
    pub game: GameState,
}

impl Session {
    fn snapshot(&self) -> Snapshot {
        Snapshot {
            session: self.id.clone(),
            created: self.created,
            status: self.status,
            transcript: self.game.transcript(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Snapshot {
    session: String,
    created: u64,
    status: SessionStatus,
    transcript: Transcript,
}

struct Inner {
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    limits: Limits,
    state_dir: Option<PathBuf>,
}

/// Shared service state; cheap to clone.
#[derive(Clone)]
pub struct AppState(Arc<Inner>);

impl AppState {
    pub fn new(limits: Limits, state_dir: Option<PathBuf>) -> Self {
        AppState(Arc::new(Inner {
            sessions: RwLock::new(HashMap::new()),
            limits,
            state_dir,
        }))
    }

    /// Restores every snapshot in the state directory by replaying its
    /// transcript. Returns the number of sessions restored.
    pub fn restore(&self) -> anyhow::Result<usize> {
        let Some(dir) = &self.0.state_dir else {
            return Ok(0);
        };
        std::fs::create_dir_all(dir)?;
        let mut restored = 0;
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let snap: Snapshot = match std::fs::read_to_string(&path)
                .map_err(anyhow::Error::from)
                .and_then(|t| Ok(serde_json::from_str(&t)?))
            {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("skipping {}: {e}", path.display());
                    continue;
                }
            };
            match game::replay(
                &snap.transcript,
                self.0.limits.max_order,
                self.0.limits.game_options(true),
            ) {
                Ok(game) => {
                    let session = Session {
                        id: snap.session.clone(),
                        created: snap.created,
                        status: snap.status,
                        game,
                    };
                    self.insert(session);
                    restored += 1;
                }
                Err(e) => eprintln!("skipping {}: {e}", path.display()),
            }
        }
        Ok(restored)
    }

    pub fn session_count(&self) -> usize {
        self.0.sessions.read().unwrap().len()
    }

    fn insert(&self, session: Session) {
        let id = session.id.clone();
        self.0
            .sessions
            .write()
            .unwrap()
            .insert(id, Arc::new(Mutex::new(session)));
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.0
            .sessions
            .read()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("unknown session {id}")))
    }

    fn persist(&self, session: &Session) {
        if let Some(dir) = &self.0.state_dir {
            if let Err(e) = write_snapshot(dir, session) {
                eprintln!("could not snapshot session {}: {e}", session.id);
            }
        }
    }
}

fn write_snapshot(dir: &Path, session: &Session) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let text = serde_json::to_string_pretty(&session.snapshot()).expect("snapshot serializes");
    let tmp = dir.join(format!("{}.json.tmp", session.id));
    std::fs::write(&tmp, text)?;
    std::fs::rename(tmp, dir.join(format!("{}.json", session.id)))
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

/// HTTP status for an engine error.
pub fn status_for(err: &GameError) -> StatusCode {
    match err {
        GameError::TooLarge { .. }
        | GameError::BudgetExceeded { .. }
        | GameError::Group(GroupError::TooLarge { .. })
        | GameError::Construction(ConstructionError::GroupTooLarge { .. })
        | GameError::Construction(ConstructionError::Aut(AutError::TooLarge { .. }))
        | GameError::Aut(AutError::TooLarge { .. }) => StatusCode::UNPROCESSABLE_ENTITY,
        GameError::Group(_) | GameError::Config(_) | GameError::BadIndex { .. } => {
            StatusCode::BAD_REQUEST
        }
        GameError::RoundsExhausted(_) => StatusCode::CONFLICT,
        _ => StatusCode::INTERNAL_SERVER_ERROR,
    }
}

impl From<GameError> for ApiError {
    fn from(err: GameError) -> Self {
        ApiError::new(status_for(&err), err.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(rej: JsonRejection) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, rej.body_text())
    }
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
}

#[derive(Debug, Deserialize)]
pub struct CreateRequest {
    pub groups: Vec<String>,
    pub rounds: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AutSummary {
    pub order: Option<u128>,
    pub verified: Option<bool>,
    #[serde(default)]
    pub partial: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CreateResponse {
    pub session: String,
    pub status: SessionStatus,
    pub rounds: usize,
    pub remaining_rounds: usize,
    /// names of `Γ_1..Γ_k`, in challenge-index order
    pub challenges: Vec<String>,
    pub graph: serde_json::Value,
    pub aut: AutSummary,
}

#[derive(Debug, Deserialize)]
pub struct ChallengeRequest {
    pub group_index: usize,
}

#[derive(Debug, Deserialize)]
pub struct ChallengeQuery {
    pub verify: Option<bool>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ChallengeResponse {
    pub round: usize,
    pub deleted_vertex: u32,
    pub aut: AutSummary,
    pub remaining_rounds: usize,
    pub status: SessionStatus,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SessionView {
    pub session: String,
    pub created: u64,
    pub status: SessionStatus,
    pub remaining_rounds: usize,
    #[serde(flatten)]
    pub transcript: Transcript,
}

#[derive(Debug, Deserialize)]
pub struct GraphQuery {
    pub format: Option<String>,
}

fn status_of(game: &GameState) -> SessionStatus {
    if game.is_finished() {
        SessionStatus::Finished
    } else {
        SessionStatus::AwaitingChallenge
    }
}

async fn create_game(
    State(app): State<AppState>,
    body: Result<Json<CreateRequest>, JsonRejection>,
) -> Result<(StatusCode, Json<CreateResponse>), ApiError> {
    let Json(req) = body?;
    let limits = app.0.limits;
    let game = blocking(move || {
        let config = GameConfig::from_specs(&req.groups, req.rounds, limits.max_order)?;
        Ok(build_game(config, limits.game_options(true))?)
    })
    .await?;
    let initial = game.initial_verification();
    let response = CreateResponse {
        session: uuid::Uuid::new_v4().simple().to_string(),
        status: status_of(&game),
        rounds: game.config().rounds(),
        remaining_rounds: game.remaining_rounds(),
        challenges: game.config().group_names()[1..].to_vec(),
        graph: serde_json::to_value(game.graph().to_json_value()).expect("graph serializes"),
        aut: AutSummary {
            order: initial.map(|r| r.aut_order),
            verified: initial.map(|r| r.verified),
            partial: initial.is_some_and(|r| r.partial),
        },
    };
    let created = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let session = Session {
        id: response.session.clone(),
        created,
        status: response.status,
        game,
    };
    app.persist(&session);
    app.insert(session);
    Ok((StatusCode::CREATED, Json(response)))
}

async fn challenge(
    State(app): State<AppState>,
    UrlPath(id): UrlPath<String>,
    Query(query): Query<ChallengeQuery>,
    body: Result<Json<ChallengeRequest>, JsonRejection>,
) -> Result<Json<ChallengeResponse>, ApiError> {
    let Json(req) = body?;
    let handle = app.get(&id)?;
    let verify = query.verify.unwrap_or(true);
    let app2 = app.clone();
    blocking(move || {
        let mut session = handle.lock().unwrap();
        match session.status {
            SessionStatus::Finished => {
                return Err(ApiError::new(StatusCode::CONFLICT, "session is finished"))
            }
            SessionStatus::Failed => {
                return Err(ApiError::new(StatusCode::CONFLICT, "session has failed"))
            }
            SessionStatus::AwaitingChallenge => {}
        }
        let deleted = session.game.player_move(req.group_index)?;
        let outcome = if verify {
            session.game.verify_round().map(|_| ())
        } else {
            session.game.record_order().map(|_| ())
        };
        if let Err(e) = outcome {
            session.status = SessionStatus::Failed;
            app2.persist(&session);
            return Err(e.into());
        }
        session.status = status_of(&session.game);
        app2.persist(&session);
        let record = session.game.history().last().expect("move recorded");
        Ok(Json(ChallengeResponse {
            round: record.round,
            deleted_vertex: deleted,
            aut: AutSummary {
                order: record.aut_order,
                verified: record.verified,
                partial: record.partial,
            },
            remaining_rounds: session.game.remaining_rounds(),
            status: session.status,
        }))
    })
    .await
}

async fn show_game(
    State(app): State<AppState>,
    UrlPath(id): UrlPath<String>,
) -> Result<Json<SessionView>, ApiError> {
    let handle = app.get(&id)?;
    let session = handle.lock().unwrap();
    Ok(Json(SessionView {
        session: session.id.clone(),
        created: session.created,
        status: session.status,
        remaining_rounds: session.game.remaining_rounds(),
        transcript: session.game.transcript(),
    }))
}

async fn show_graph(
    State(app): State<AppState>,
    UrlPath(id): UrlPath<String>,
    Query(query): Query<GraphQuery>,
) -> Result<Response, ApiError> {
    let handle = app.get(&id)?;
    let session = handle.lock().unwrap();
    let (content_type, body) = match query.format.as_deref().unwrap_or("json") {
        "json" => ("application/json", session.game.graph().to_json()),
        "dot" => ("text/vnd.graphviz", session.game.graph().to_dot()),
        other => {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                format!("unknown format {other:?}, expected json or dot"),
            ))
        }
    };
    Ok(([(header::CONTENT_TYPE, content_type)], body).into_response())
}

/// Router with CORS for `cors_origin` (any origin when `None`).
pub fn router(app: AppState, cors_origin: Option<&str>) -> anyhow::Result<Router> {
    let origin = match cors_origin {
        None | Some("*") => AllowOrigin::any(),
        Some(o) => AllowOrigin::exact(HeaderValue::from_str(o)?),
    };
    let cors = CorsLayer::new()
        .allow_origin(origin)
        .allow_methods(Any)
        .allow_headers(Any);
    Ok(Router::new()
        .route("/games", post(create_game))
        .route("/games/:id", get(show_game))
        .route("/games/:id/challenge", post(challenge))
        .route("/games/:id/graph", get(show_graph))
        .layer(cors)
        .with_state(app))
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(addr: &str, app: AppState, cors_origin: Option<&str>) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(app, cors_origin)?).await?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn engine_errors_map_to_statuses() {
        let cases = [
            (
                GameError::TooLarge {
                    projected: 10,
                    bound: 5,
                },
                StatusCode::UNPROCESSABLE_ENTITY,
            ),
            (
                GameError::Group(GroupError::TooLarge {
                    order: 100,
                    bound: 64,
                }),
                StatusCode::UNPROCESSABLE_ENTITY,
            ),
            (
                GameError::Aut(AutError::TooLarge {
                    vertices: 10,
                    bound: 5,
                }),
                StatusCode::UNPROCESSABLE_ENTITY,
            ),
            (
                GameError::BadIndex { index: 3, k: 1 },
                StatusCode::BAD_REQUEST,
            ),
            (GameError::Config("x".into()), StatusCode::BAD_REQUEST),
            (GameError::RoundsExhausted(1), StatusCode::CONFLICT),
            (
                GameError::Verification("x".into()),
                StatusCode::INTERNAL_SERVER_ERROR,
            ),
        ];
        for (err, status) in cases {
            assert_eq!(status_for(&err), status, "{err}");
        }
    }

    #[test]
    fn status_serializes_kebab_case() {
        assert_eq!(
            serde_json::to_string(&SessionStatus::AwaitingChallenge).unwrap(),
            "\"awaiting-challenge\""
        );
    }
}
