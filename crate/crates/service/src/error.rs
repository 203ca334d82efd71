use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ServiceError {
    #[error("no match with id `{0}`")]
    UnknownMatch(String),
    #[error("token does not belong to this match")]
    Unauthorized,
    #[error("move is for turn {got} but the match is on turn {expected}")]
    WrongTurn { expected: u32, got: u32 },
    #[error("{0}")]
    InvalidMove(String),
    #[error("a different move is already committed for this turn")]
    AlreadyCommittedDifferently,
    #[error("the match is finished")]
    MatchFinished,
    #[error("the match was already finished")]
    AlreadyFinished,
    #[error("invalid match config: {0}")]
    InvalidConfig(String),
    #[error("malformed request: {0}")]
    BadRequest(String),
    #[error("storage failure: {0}")]
    Storage(String),
}

impl ServiceError {
    /// Machine-readable code carried in error bodies.
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::UnknownMatch(_) => "unknown-match",
            ServiceError::Unauthorized => "unauthorized",
            ServiceError::WrongTurn { .. } => "wrong-turn",
            ServiceError::InvalidMove(_) => "invalid-move",
            ServiceError::AlreadyCommittedDifferently => "already-committed-differently",
            ServiceError::MatchFinished => "match-finished",
            ServiceError::AlreadyFinished => "already-finished",
            ServiceError::InvalidConfig(_) => "invalid-config",
            ServiceError::BadRequest(_) => "bad-request",
            ServiceError::Storage(_) => "storage",
        }
    }

    fn status(&self) -> StatusCode {
        match self {
            ServiceError::UnknownMatch(_) => StatusCode::NOT_FOUND,
            ServiceError::Unauthorized => StatusCode::FORBIDDEN,
            ServiceError::InvalidMove(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::InvalidConfig(_) | ServiceError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ServiceError::Storage(_) => StatusCode::INTERNAL_SERVER_ERROR,
            ServiceError::WrongTurn { .. }
            | ServiceError::AlreadyCommittedDifferently
            | ServiceError::MatchFinished
            | ServiceError::AlreadyFinished => StatusCode::CONFLICT,
        }
    }
}

impl From<std::io::Error> for ServiceError {
    fn from(e: std::io::Error) -> Self {
        ServiceError::Storage(e.to_string())
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    code: &'a str,
    message: String,
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let body = ErrorBody { code: self.code(), message: self.to_string() };
        (self.status(), Json(body)).into_response()
    }
}
