use std::collections::HashMap;

use arbor_core::{
    lint_statement_text, slugify, BeliefCounts, Edge, ExportFormat, Form, Polarity, RelationRequest,
    StatementId, StatementKind, View,
};
use arbor_store::{Actor, CommentView, Notification, NotificationId, UserStats};
use axum::extract::{FromRequest, FromRequestParts, MatchedPath, State};
use axum::http::header::{AUTHORIZATION, CONTENT_TYPE, LOCATION};
use axum::http::request::Parts;
use axum::http::{HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use serde::{Deserialize, Serialize};

use crate::error::ApiError;
use crate::payload::{canonical_path, Candidate, StatementPayload, UserPayload};
use crate::AppState;

/// Search score at or above which a new statement needs explicit review.
pub const DUPLICATE_REVIEW_SCORE: f64 = 0.5;
pub const VIEWED_FORM_HEADER: &str = "x-viewed-form";
const SEARCH_LIMIT_MAX: usize = 100;
const CANDIDATE_LIMIT: usize = 10;

// RFC 3986 unreserved characters stay literal; space becomes %20.
const COMPONENT: &AsciiSet = &NON_ALPHANUMERIC.remove(b'-').remove(b'.').remove(b'_').remove(b'~');

type ApiResult<T> = Result<T, ApiError>;

#[derive(FromRequest)]
#[from_request(via(axum::Json), rejection(ApiError))]
struct ApiJson<T>(T);

#[derive(FromRequestParts)]
#[from_request(via(axum::extract::Query), rejection(ApiError))]
struct ApiQuery<T>(T);

#[derive(FromRequestParts)]
#[from_request(via(axum::extract::Path), rejection(ApiError))]
struct ApiPath<T>(T);

fn bearer(parts: &Parts) -> Option<&str> {
    parts.headers.get(AUTHORIZATION)?.to_str().ok()?.strip_prefix("Bearer ")
}

/// A request carrying a live session token.
pub struct Auth {
    pub user: arbor_core::UserId,
    token: String,
}

impl FromRequestParts<AppState> for Auth {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, app: &AppState) -> ApiResult<Self> {
        let token = bearer(parts).ok_or_else(ApiError::unauthorized)?;
        let user = app.sessions().resolve(token, app.now()).ok_or_else(ApiError::unauthorized)?;
        Ok(Auth { user, token: token.to_string() })
    }
}

/// Like [`Auth`] but anonymous requests pass. A bad token is still refused.
struct MaybeAuth(Option<arbor_core::UserId>);

impl FromRequestParts<AppState> for MaybeAuth {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, app: &AppState) -> ApiResult<Self> {
        if parts.headers.contains_key(AUTHORIZATION) {
            Ok(MaybeAuth(Some(Auth::from_request_parts(parts, app).await?.user)))
        } else {
            Ok(MaybeAuth(None))
        }
    }
}

pub fn router(state: AppState) -> Router {
    let api = Router::new()
        .route("/users", post(register))
        .route("/users/me", get(me))
        .route("/sessions", post(login).delete(logout))
        .route("/statement/{id}", get(statement_page))
        .route("/statement/{id}/{slug}", get(statement_page))
        .route("/statements", post(create_statement))
        .route("/statements/{id}/belief", put(set_belief).delete(remove_belief))
        .route("/statements/{id}/comments", get(list_comments).post(add_comment))
        .route("/statements/{id}/share", get(share_link))
        .route("/statements/{id}/approve", post(approve))
        .route("/statements/{id}/demote", post(demote))
        .route("/relations", post(create_relation))
        .route("/search", get(search))
        .route("/inbox", get(inbox))
        .route("/inbox/{id}/read", post(mark_read))
        .route("/moderation/queue", get(moderation_queue))
        .route("/stats/me", get(my_stats))
        .route("/export/graph", get(export_graph));
    Router::new()
        .route("/statement/{id}", get(statement_page))
        .route("/statement/{id}/{slug}", get(statement_page))
        .nest("/api/v1", api)
        .fallback(|| async { ApiError::not_found("no such route") })
        .with_state(state)
}

// users and sessions

#[derive(Deserialize)]
struct Credentials {
    username: String,
    credential: String,
}

async fn register(
    State(app): State<AppState>,
    ApiJson(c): ApiJson<Credentials>,
) -> ApiResult<impl IntoResponse> {
    let user = app.write().register(&c.username, &c.credential)?;
    Ok((StatusCode::CREATED, Json(UserPayload::from(&user))))
}

async fn me(State(app): State<AppState>, auth: Auth) -> ApiResult<Json<UserPayload>> {
    Ok(Json(app.read().user(auth.user)?.into()))
}

#[derive(Serialize)]
struct SessionPayload {
    token: String,
    expires_at: arbor_core::Timestamp,
    user: UserPayload,
}

async fn login(
    State(app): State<AppState>,
    ApiJson(c): ApiJson<Credentials>,
) -> ApiResult<impl IntoResponse> {
    let user = app.read().authenticate(&c.username, &c.credential)?;
    let session = app.sessions().create(user.id, app.now(), app.settings().session_ttl_ms);
    let body = SessionPayload { token: session.token, expires_at: session.expires_at, user: (&user).into() };
    Ok((StatusCode::CREATED, Json(body)))
}

async fn logout(State(app): State<AppState>, auth: Auth) -> StatusCode {
    app.sessions().revoke(&auth.token);
    StatusCode::NO_CONTENT
}

// statements

#[derive(Deserialize)]
struct FormQuery {
    form: Option<Form>,
}

#[derive(Serialize)]
struct StatementPage {
    #[serde(flatten)]
    view: View,
    text_normal: String,
    text_negated: String,
    #[serde(rename = "self")]
    self_link: String,
    my_belief: Option<Form>,
}

/// Deep link. A missing or stale slug redirects to the canonical URL with
/// the `form` query kept.
async fn statement_page(
    State(app): State<AppState>,
    matched: MatchedPath,
    ApiPath(params): ApiPath<HashMap<String, String>>,
    ApiQuery(q): ApiQuery<FormQuery>,
    MaybeAuth(user): MaybeAuth,
) -> ApiResult<Response> {
    let id: StatementId = params["id"]
        .parse()
        .map_err(|_| ApiError::new("bad_request", format!("invalid statement id {:?}", params["id"])))?;
    let store = app.read();
    let statement = store.statement(id)?;
    let slug = slugify(&statement.text_normal);
    let prefix = if matched.as_str().starts_with("/api/v1/") { "/api/v1" } else { "" };
    let query = q.form.map(|f| format!("?form={}", f.as_str())).unwrap_or_default();
    let canonical = format!("{prefix}{}{query}", canonical_path(id, &slug));

    if params.get("slug").map_or("", String::as_str) != slug {
        return Ok((StatusCode::MOVED_PERMANENTLY, [(LOCATION, canonical)]).into_response());
    }
    let page = StatementPage {
        view: store.view(id, q.form.unwrap_or(Form::Normal))?,
        text_normal: statement.text_normal.clone(),
        text_negated: statement.negated_text(),
        self_link: canonical,
        my_belief: user.and_then(|u| store.belief(u, id)).map(|b| b.form),
    };
    Ok(Json(page).into_response())
}

#[derive(Deserialize)]
struct NewStatement {
    text_normal: String,
    #[serde(default)]
    text_negated_custom: Option<String>,
    #[serde(default)]
    duplicates_reviewed: bool,
}

/// Creation is search-first: similar existing statements are returned for
/// review unless the client says it has already looked.
async fn create_statement(
    State(app): State<AppState>,
    auth: Auth,
    ApiJson(body): ApiJson<NewStatement>,
) -> ApiResult<impl IntoResponse> {
    let mut store = app.write();
    if !body.duplicates_reviewed && lint_statement_text(body.text_normal.trim()).is_ok() {
        let candidates: Vec<Candidate> = store
            .search(&body.text_normal, CANDIDATE_LIMIT)
            .unwrap_or_default()
            .iter()
            .filter(|h| h.score >= DUPLICATE_REVIEW_SCORE && h.statement.kind == StatementKind::Plain)
            .map(Candidate::from)
            .collect();
        if !candidates.is_empty() {
            let detail = format!(
                "{} similar statements exist; review them or resubmit with duplicates_reviewed",
                candidates.len()
            );
            return Err(ApiError {
                candidates: Some(candidates),
                ..ApiError::new("review_duplicates", detail)
            });
        }
    }
    let statement =
        store.submit_statement(auth.user, &body.text_normal, body.text_negated_custom.as_deref())?;
    Ok((StatusCode::CREATED, Json(StatementPayload::from(&statement))))
}

#[derive(Deserialize)]
struct SearchQuery {
    q: String,
    limit: Option<usize>,
}

async fn search(
    State(app): State<AppState>,
    ApiQuery(q): ApiQuery<SearchQuery>,
) -> ApiResult<Json<Vec<Candidate>>> {
    let limit = q.limit.unwrap_or(20).clamp(1, SEARCH_LIMIT_MAX);
    let hits = app.read().search(&q.q, limit)?;
    Ok(Json(hits.iter().map(Candidate::from).collect()))
}

// relations

fn normal() -> Form {
    Form::Normal
}

#[derive(Deserialize)]
struct NewRelation {
    parent: StatementId,
    #[serde(default = "normal")]
    parent_form: Form,
    child: StatementId,
    #[serde(default = "normal")]
    child_form: Form,
    polarity: Polarity,
    /// Accepted for symmetry with statement creation; relations have no
    /// duplicate review beyond the one-edge-per-pair rule.
    #[serde(default)]
    #[allow(dead_code)]
    duplicates_reviewed: bool,
}

#[derive(Serialize)]
struct RelationCreated {
    edge: Edge,
    relation_statement: Option<StatementPayload>,
}

async fn create_relation(
    State(app): State<AppState>,
    auth: Auth,
    ApiJson(body): ApiJson<NewRelation>,
) -> ApiResult<impl IntoResponse> {
    let req = RelationRequest {
        child: body.child,
        child_form: body.child_form,
        parent: body.parent,
        parent_form: body.parent_form,
        polarity: body.polarity,
    };
    let (edge, relation) = app.write().add_relation(auth.user, req)?;
    let body = RelationCreated { edge, relation_statement: relation.as_ref().map(StatementPayload::from) };
    Ok((StatusCode::CREATED, Json(body)))
}

// beliefs

#[derive(Deserialize)]
struct BeliefBody {
    form: Form,
    #[serde(default)]
    viewed_form: Option<Form>,
}

#[derive(Serialize)]
struct BeliefState {
    statement: StatementId,
    form: Option<Form>,
    belief_counts: BeliefCounts,
}

/// Believing the negated form requires the client to attest that it showed
/// the inverse view, either in the body or the `X-Viewed-Form` header.
async fn set_belief(
    State(app): State<AppState>,
    auth: Auth,
    ApiPath(id): ApiPath<StatementId>,
    headers: HeaderMap,
    ApiJson(body): ApiJson<BeliefBody>,
) -> ApiResult<Json<BeliefState>> {
    let mut store = app.write();
    store.statement(id)?;
    if body.form == Form::Negated {
        let header = headers.get(VIEWED_FORM_HEADER).and_then(|v| v.to_str().ok());
        let attested = body.viewed_form == Some(Form::Negated)
            || header.is_some_and(|h| h.trim().eq_ignore_ascii_case("negated"));
        if !attested {
            return Err(ApiError::new(
                "inverse_view_required",
                "believing the negated form requires viewed_form=negated",
            ));
        }
    }
    let belief = store.set_belief(auth.user, id, body.form)?;
    Ok(Json(BeliefState { statement: id, form: Some(belief.form), belief_counts: store.belief_counts(id) }))
}

async fn remove_belief(
    State(app): State<AppState>,
    auth: Auth,
    ApiPath(id): ApiPath<StatementId>,
) -> ApiResult<Json<BeliefState>> {
    let mut store = app.write();
    store.remove_belief(auth.user, id)?;
    Ok(Json(BeliefState { statement: id, form: None, belief_counts: store.belief_counts(id) }))
}

// comments

async fn list_comments(
    State(app): State<AppState>,
    ApiPath(id): ApiPath<StatementId>,
) -> ApiResult<Json<Vec<CommentView>>> {
    Ok(Json(app.read().comments(id)?))
}

#[derive(Deserialize)]
struct NewComment {
    body: String,
}

async fn add_comment(
    State(app): State<AppState>,
    auth: Auth,
    ApiPath(id): ApiPath<StatementId>,
    ApiJson(body): ApiJson<NewComment>,
) -> ApiResult<impl IntoResponse> {
    let mut store = app.write();
    let comment = store.add_comment(auth.user, id, &body.body)?;
    let view = CommentView {
        id: comment.id,
        statement: comment.statement,
        author_username: store.user(auth.user)?.username.clone(),
        body: comment.body,
        created_at: comment.created_at,
    };
    Ok((StatusCode::CREATED, Json(view)))
}

// share links

#[derive(Serialize)]
struct ShareLink {
    url: String,
    title: String,
    link: String,
}

pub fn compose_share_url(base: &str, title: &str, link: &str) -> String {
    let sep = if base.contains('?') { '&' } else { '?' };
    format!(
        "{base}{sep}title={}&url={}",
        utf8_percent_encode(title, COMPONENT),
        utf8_percent_encode(link, COMPONENT)
    )
}

async fn share_link(
    State(app): State<AppState>,
    ApiPath(id): ApiPath<StatementId>,
) -> ApiResult<Json<ShareLink>> {
    let store = app.read();
    let statement = store.statement(id)?;
    let settings = app.settings();
    let link = format!("{}{}", settings.public_url, canonical_path(id, &slugify(&statement.text_normal)));
    let title = statement.text_normal.clone();
    Ok(Json(ShareLink { url: compose_share_url(&settings.share_base, &title, &link), title, link }))
}

// notifications

#[derive(Serialize)]
struct Inbox {
    unread: usize,
    notifications: Vec<Notification>,
}

async fn inbox(State(app): State<AppState>, auth: Auth) -> ApiResult<Json<Inbox>> {
    let store = app.read();
    Ok(Json(Inbox { unread: store.unread_count(auth.user), notifications: store.inbox(auth.user)? }))
}

async fn mark_read(
    State(app): State<AppState>,
    auth: Auth,
    ApiPath(id): ApiPath<NotificationId>,
) -> ApiResult<StatusCode> {
    app.write().mark_read(auth.user, id)?;
    Ok(StatusCode::NO_CONTENT)
}

// moderation

async fn moderation_queue(State(app): State<AppState>, auth: Auth) -> ApiResult<Json<Vec<StatementPayload>>> {
    let store = app.read();
    if !store.user(auth.user)?.is_moderator {
        return Err(ApiError::new("forbidden", "moderators only"));
    }
    Ok(Json(store.drafts().into_iter().map(StatementPayload::from).collect()))
}

async fn approve(
    State(app): State<AppState>,
    auth: Auth,
    ApiPath(id): ApiPath<StatementId>,
) -> ApiResult<Json<StatementPayload>> {
    let statement = app.write().approve(Actor::User(auth.user), id)?;
    Ok(Json((&statement).into()))
}

async fn demote(
    State(app): State<AppState>,
    auth: Auth,
    ApiPath(id): ApiPath<StatementId>,
) -> ApiResult<Json<StatementPayload>> {
    let statement = app.write().demote(Actor::User(auth.user), id)?;
    Ok(Json((&statement).into()))
}

// stats and export

async fn my_stats(State(app): State<AppState>, auth: Auth) -> ApiResult<Json<UserStats>> {
    Ok(Json(app.read().user_stats(auth.user)?))
}

#[derive(Deserialize)]
struct ExportQuery {
    format: Option<String>,
}

async fn export_graph(
    State(app): State<AppState>,
    ApiQuery(q): ApiQuery<ExportQuery>,
) -> ApiResult<Response> {
    let format: ExportFormat = match q.format.as_deref() {
        None => ExportFormat::Json,
        Some(f) => {
            f.parse().map_err(|_| ApiError::new("bad_request", format!("unknown export format {f:?}")))?
        }
    };
    let body = app.read().export_graph(format);
    let content_type = match format {
        ExportFormat::Json => "application/json",
        ExportFormat::Dot => "text/vnd.graphviz; charset=utf-8",
    };
    Ok(([(CONTENT_TYPE, content_type)], body).into_response())
}
