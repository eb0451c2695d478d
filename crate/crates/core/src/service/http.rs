use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::automaton::Automaton;
use crate::constructions::named;
use crate::format::serialize_automaton;

use super::{ApiError, CreateRequest, ErrorCode, MoveRequest, SessionStore, StoreConfig};

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.code.http_status())
            .unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

#[derive(Serialize)]
struct Builtin {
    name: &'static str,
    parameter: &'static str,
    description: &'static str,
}

const BUILTINS: [Builtin; 3] = [
    Builtin {
        name: "cerny:n",
        parameter: "state count n ≥ 2",
        description: "Černý automaton with n states; its shortest reset word has length (n−1)²",
    },
    Builtin {
        name: "duplication:n",
        parameter: "n ≥ 2",
        description: "duplication of the n-state Černý automaton; Alice needs (n−1)²+1 moves",
    },
    Builtin {
        name: "qsat:psi0",
        parameter: "fixed",
        description: "QSAT gadget of (x1∨x2∨x3)(¬x1∨x2∨x3)(x1∨¬x2∨x3)(¬x2∨¬x3), 17 states",
    },
];

fn decode<T: DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body)
        .map_err(|e| ApiError::new(ErrorCode::InvalidRequest, e.to_string()))
}

type AppState = Arc<SessionStore>;

async fn create_session(State(store): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: CreateRequest = decode(&body)?;
    let view = tokio::task::spawn_blocking(move || store.create(req))
        .await
        .map_err(|e| ApiError::new(ErrorCode::Internal, e.to_string()))??;
    Ok((StatusCode::CREATED, Json(view)).into_response())
}

async fn play_move(
    State(store): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let req: MoveRequest = decode(&body)?;
    let out = tokio::task::spawn_blocking(move || store.play(&id, req))
        .await
        .map_err(|e| ApiError::new(ErrorCode::Internal, e.to_string()))??;
    Ok(Json(out).into_response())
}

async fn get_session(
    State(store): State<AppState>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    Ok(Json(store.get(&id)?).into_response())
}

async fn list_sessions(State(store): State<AppState>) -> Response {
    Json(store.list()).into_response()
}

async fn list_builtins() -> Response {
    Json(BUILTINS).into_response()
}

async fn get_builtin(Path(name): Path<String>) -> Result<Response, ApiError> {
    let dfa = named(&name).map_err(|e| ApiError::new(ErrorCode::NotFound, e.to_string()))?;
    let doc: serde_json::Value = serde_json::from_str(&serialize_automaton(&Automaton::Dfa(dfa)))
        .expect("canonical document is JSON");
    Ok(Json(doc).into_response())
}

async fn fallback() -> ApiError {
    ApiError::new(ErrorCode::NotFound, "no such route")
}

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/sessions", post(create_session).get(list_sessions))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/moves", post(play_move))
        .route("/builtin", get(list_builtins))
        .route("/builtin/{name}", get(get_builtin))
        .fallback(fallback)
        .with_state(store)
}

#[derive(Clone, Debug)]
pub struct ServeConfig {
    pub addr: SocketAddr,
    pub idle_timeout: Duration,
    pub transcripts: Option<PathBuf>,
}

/// Bind and serve until Ctrl-C.
pub async fn serve(config: ServeConfig) -> std::io::Result<()> {
    let store = Arc::new(SessionStore::new(StoreConfig {
        idle_timeout: config.idle_timeout,
        transcripts: config.transcripts,
    })?);
    let listener = tokio::net::TcpListener::bind(config.addr).await?;
    log::info!("listening on {}", listener.local_addr()?);

    let sweeper = Arc::clone(&store);
    let period = (config.idle_timeout / 2).clamp(Duration::from_secs(1), Duration::from_secs(60));
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(period);
        loop {
            tick.tick().await;
            sweeper.evict_idle(Instant::now());
        }
    });

    axum::serve(listener, router(store))
        .with_graceful_shutdown(async {
            tokio::signal::ctrl_c().await.ok();
            log::info!("shutting down");
        })
        .await
}
