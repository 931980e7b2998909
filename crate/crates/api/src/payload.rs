//! Response bodies. Statement payloads never name their author.

use arbor_core::{
    slugify, Form, RelationPayload, SearchHit, Statement, StatementId, StatementKind, Status, Timestamp,
    UserId,
};
use arbor_store::User;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatementPayload {
    pub id: StatementId,
    pub kind: StatementKind,
    pub status: Status,
    pub text_normal: String,
    pub text_negated: String,
    pub negation_is_custom: bool,
    pub slug: String,
    pub url: String,
    pub created_at: Timestamp,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub overlong_exempt: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<RelationPayload>,
}

impl From<&Statement> for StatementPayload {
    fn from(s: &Statement) -> Self {
        let slug = slugify(&s.text_normal);
        StatementPayload {
            id: s.id,
            kind: s.kind,
            status: s.status,
            text_normal: s.text_normal.clone(),
            text_negated: s.negated_text(),
            negation_is_custom: s.text_negated_custom.is_some(),
            url: canonical_path(s.id, &slug),
            slug,
            created_at: s.created_at,
            overlong_exempt: s.overlong_exempt,
            relation: s.relation,
        }
    }
}

/// `/statement/{id}/{slug}`, or `/statement/{id}` when the text yields no slug.
pub fn canonical_path(id: StatementId, slug: &str) -> String {
    if slug.is_empty() {
        format!("/statement/{id}")
    } else {
        format!("/statement/{id}/{slug}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub statement: StatementPayload,
    pub score: f64,
    pub matched_form: Form,
}

impl From<&SearchHit> for Candidate {
    fn from(h: &SearchHit) -> Self {
        Candidate { statement: (&h.statement).into(), score: h.score, matched_form: h.matched_form }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UserPayload {
    pub id: UserId,
    pub username: String,
    pub is_moderator: bool,
    pub approved_count: u64,
}

impl From<&User> for UserPayload {
    fn from(u: &User) -> Self {
        UserPayload {
            id: u.id,
            username: u.username.clone(),
            is_moderator: u.is_moderator,
            approved_count: u.approved_count,
        }
    }
}
