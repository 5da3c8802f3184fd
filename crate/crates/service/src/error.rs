use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use latentlab_core::datagen::FieldError;
use latentlab_core::Error;
use serde::Serialize;

/// Error payload: `{"api_version": "1", "error": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<FieldError>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub row: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub col: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub requested: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attainable: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: Box<ErrorBody>,
}

impl ApiError {
    fn new(status: StatusCode, kind: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            body: Box::new(ErrorBody {
                kind,
                message: message.into(),
                fields: Vec::new(),
                row: None,
                col: None,
                requested: None,
                attainable: None,
            }),
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, "validation", message)
    }

    pub fn fields(fields: Vec<FieldError>) -> Self {
        let message = fields
            .iter()
            .map(|f| format!("{}: {}", f.field, f.message))
            .collect::<Vec<_>>()
            .join("; ");
        let mut err = Self::validation(message);
        err.body.fields = fields;
        err
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", message)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }
}

impl From<Error> for ApiError {
    fn from(err: Error) -> Self {
        let message = err.to_string();
        match err {
            Error::Rank { requested, attainable } => {
                let mut e = Self::new(StatusCode::CONFLICT, "rank", message);
                e.body.requested = Some(requested);
                e.body.attainable = Some(attainable);
                e
            }
            e if e.is_computational() => Self::new(StatusCode::CONFLICT, "computation", message),
            Error::Parse { row, col, .. } => {
                let mut e = Self::new(StatusCode::UNPROCESSABLE_ENTITY, "parse", message);
                e.body.row = Some(row);
                e.body.col = Some(col);
                e
            }
            Error::NonFinite { row, col } => {
                let mut e = Self::new(StatusCode::UNPROCESSABLE_ENTITY, "parse", message);
                e.body.row = Some(row + 1);
                e.body.col = Some(col + 1);
                e
            }
            Error::InvalidArgument { name, reason } => {
                let mut e = Self::validation(message);
                e.body.fields = vec![FieldError {
                    field: name.to_string(),
                    message: reason,
                }];
                e
            }
            Error::Dimension { .. } | Error::Format(_) | Error::Split(_) => Self::validation(message),
            Error::Leakage | Error::Io(_) => Self::internal(message),
            _ => Self::internal(message),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = serde_json::json!({
            "api_version": crate::API_VERSION,
            "error": self.body,
        });
        (self.status, Json(body)).into_response()
    }
}
