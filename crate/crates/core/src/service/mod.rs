//! HTTP JSON service for playing the synchronization game against the
//! engine.
//!
//! | route | body | reply |
//! |---|---|---|
//! | `POST /sessions` | `{automaton, human_role, strategy_mode?}` | session view |
//! | `POST /sessions/{id}/moves` | `{letter}` | move outcome |
//! | `GET /sessions/{id}` | | session view with history |
//! | `GET /sessions` | | session summaries |
//! | `GET /builtin` | | builtin generators |
//! | `GET /builtin/{name}` | | interchange document |
//!
//! Errors are `{code, message}` with a matching HTTP status.

mod http;
mod session;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub use http::{router, serve, ServeConfig};
pub use session::{
    resolve_automaton, CreateRequest, GameSession, HalfMove, MoveOutcome, MoveRequest,
    PositionView, SessionStatus, SessionStore, SessionSummary, SessionView, StoreConfig,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ErrorCode {
    ParseError,
    InvalidRequest,
    Capacity,
    NotFound,
    OutOfTurn,
    InvalidLetter,
    SessionFinished,
    Internal,
}

impl ErrorCode {
    pub fn http_status(self) -> u16 {
        match self {
            ErrorCode::ParseError | ErrorCode::InvalidRequest | ErrorCode::InvalidLetter => 400,
            ErrorCode::NotFound => 404,
            ErrorCode::OutOfTurn | ErrorCode::SessionFinished => 409,
            ErrorCode::Capacity => 422,
            ErrorCode::Internal => 500,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        ApiError {
            code,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}: {}", self.code, self.message)
    }
}

impl std::error::Error for ApiError {}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) => ErrorCode::ParseError,
            Error::Capacity { .. } => ErrorCode::Capacity,
            Error::InputDomain(_) => ErrorCode::InvalidRequest,
            Error::Strategy(_) | Error::Contract(_) | Error::Cancelled => ErrorCode::Internal,
        };
        ApiError::new(code, e.to_string())
    }
}
