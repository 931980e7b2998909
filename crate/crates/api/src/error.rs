use arbor_core::{GraphError, LintReport};
use arbor_store::StoreError;
use axum::extract::rejection::{JsonRejection, PathRejection, QueryRejection};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;

use crate::payload::Candidate;

/// Every error code the service emits, with its HTTP status. This table is
/// mirrored in `docs/api.md`; a test keeps the two in step.
pub const CODES: &[(&str, u16)] = &[
    ("bad_request", 400),
    ("empty_query", 400),
    ("unauthorized", 401),
    ("invalid_login", 401),
    ("forbidden", 403),
    ("not_found", 404),
    ("unknown_user", 404),
    ("username_taken", 409),
    ("duplicate_relation", 409),
    ("review_duplicates", 409),
    ("wrong_status", 409),
    ("store_not_empty", 409),
    ("lint_failed", 422),
    ("draft_endpoint", 422),
    ("self_relation", 422),
    ("inverse_view_required", 422),
    ("draft_statement", 422),
    ("invalid_username", 422),
    ("invalid_credential", 422),
    ("empty_body", 422),
    ("body_too_long", 422),
    ("corpus_invalid", 422),
    ("store_unavailable", 503),
];

#[derive(Debug, Clone, Serialize)]
pub struct ApiError {
    pub status: u16,
    pub code: &'static str,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lint_report: Option<LintReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<Candidate>>,
}

impl ApiError {
    /// Panics on a code missing from [`CODES`].
    pub fn new(code: &'static str, detail: impl Into<String>) -> ApiError {
        let status = CODES
            .iter()
            .find(|(c, _)| *c == code)
            .map(|(_, s)| *s)
            .unwrap_or_else(|| panic!("unregistered error code {code}"));
        ApiError { status, code, detail: detail.into(), lint_report: None, candidates: None }
    }

    pub fn unauthorized() -> ApiError {
        ApiError::new("unauthorized", "a valid session token is required")
    }

    pub fn not_found(detail: impl Into<String>) -> ApiError {
        ApiError::new("not_found", detail)
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> ApiError {
        let detail = e.to_string();
        let code = match e {
            StoreError::Graph(g) => return g.into(),
            StoreError::UnknownUser(_) | StoreError::UnknownUsername(_) => "unknown_user",
            StoreError::UsernameTaken(_) => "username_taken",
            StoreError::InvalidUsername => "invalid_username",
            StoreError::InvalidCredential => "invalid_credential",
            StoreError::InvalidLogin => "invalid_login",
            StoreError::NotModerator(_) | StoreError::NotRecipient(_) => "forbidden",
            StoreError::WrongStatus { .. } => "wrong_status",
            StoreError::DraftStatement(_) => "draft_statement",
            StoreError::EmptyBody => "empty_body",
            StoreError::BodyTooLong(_) => "body_too_long",
            StoreError::UnknownNotification(_) => "not_found",
            StoreError::Corpus(_) => "corpus_invalid",
            StoreError::NotEmpty => "store_not_empty",
            StoreError::Unavailable(_)
            | StoreError::Locked(_)
            | StoreError::CorruptLog(_)
            | StoreError::Poisoned
            | StoreError::Io(_) => {
                tracing::error!(error = %detail, "store failure");
                "store_unavailable"
            }
        };
        ApiError::new(code, detail)
    }
}

impl From<GraphError> for ApiError {
    fn from(e: GraphError) -> ApiError {
        let detail = e.to_string();
        match e {
            GraphError::UnknownStatement(_) => ApiError::new("not_found", detail),
            GraphError::LintFailed { report, .. } => {
                ApiError { lint_report: Some(report), ..ApiError::new("lint_failed", detail) }
            }
            GraphError::DraftEndpoint(_) => ApiError::new("draft_endpoint", detail),
            GraphError::SelfRelation(_) => ApiError::new("self_relation", detail),
            GraphError::DuplicateRelation { .. } => ApiError::new("duplicate_relation", detail),
            GraphError::EmptyQuery => ApiError::new("empty_query", detail),
            GraphError::Integrity { .. } => ApiError::new("corpus_invalid", detail),
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> ApiError {
        ApiError::new("bad_request", e.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> ApiError {
        ApiError::new("bad_request", e.body_text())
    }
}

impl From<PathRejection> for ApiError {
    fn from(e: PathRejection) -> ApiError {
        ApiError::new("bad_request", e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}
