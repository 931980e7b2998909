//! Corpus interchange file, schema version 1.
//!
//! The file holds the whole community state except notifications and
//! sessions. Arrays are ordered by id (beliefs by statement, then user) so
//! that exporting the same state always yields the same bytes.

use std::collections::{BTreeMap, HashMap, HashSet};

use arbor_core::{Edge, Graph, Statement, StatementKind, Status};
use serde::{Deserialize, Serialize};

use crate::credential;
use crate::error::{Result, StoreError};
use crate::model::{Belief, Comment, CommentId, User};
use crate::state::{State, MAX_COMMENT_CHARS};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementRecord {
    #[serde(flatten)]
    pub statement: Statement,
    /// Set on drafts whose approval was already credited to the author.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub was_approved: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusFile {
    pub schema_version: u32,
    pub statements: Vec<StatementRecord>,
    pub edges: Vec<Edge>,
    pub users: Vec<User>,
    pub beliefs: Vec<Belief>,
    pub comments: Vec<Comment>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CorpusSummary {
    pub statements: usize,
    pub relation_statements: usize,
    pub edges: usize,
    pub users: usize,
    pub beliefs: usize,
    pub comments: usize,
}

impl std::fmt::Display for CorpusSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} statements, {} edges ({} relation statements, {} users, {} beliefs, {} comments)",
            self.statements, self.edges, self.relation_statements, self.users, self.beliefs, self.comments
        )
    }
}

impl CorpusFile {
    pub fn summary(&self) -> CorpusSummary {
        let relation_statements =
            self.statements.iter().filter(|r| r.statement.kind == StatementKind::Relation).count();
        CorpusSummary {
            statements: self.statements.len() - relation_statements,
            relation_statements,
            edges: self.edges.len(),
            users: self.users.len(),
            beliefs: self.beliefs.len(),
            comments: self.comments.len(),
        }
    }

    pub fn from_json(text: &str) -> Result<CorpusFile> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| StoreError::Corpus(format!("invalid JSON: {e}")))?;
        match value.get("schema_version").and_then(|v| v.as_u64()) {
            Some(v) if v == SCHEMA_VERSION as u64 => {}
            Some(v) => {
                return Err(StoreError::Corpus(format!(
                    "schema version {v} is not supported (expected {SCHEMA_VERSION})"
                )))
            }
            None => return Err(StoreError::Corpus("missing schema_version".into())),
        }
        serde_json::from_value(value).map_err(|e| StoreError::Corpus(format!("schema mismatch: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("corpus serializes")
    }

    /// Replace usernames with `user-<id>` and drop credential digests.
    pub fn pseudonymized(mut self) -> CorpusFile {
        for u in &mut self.users {
            u.username = format!("user-{}", u.id);
            u.credential_digest = None;
        }
        self
    }
}

impl State {
    pub(crate) fn to_corpus(&self) -> CorpusFile {
        CorpusFile {
            schema_version: SCHEMA_VERSION,
            statements: self
                .graph
                .statements()
                .map(|s| StatementRecord {
                    statement: s.clone(),
                    was_approved: s.status == Status::Draft && self.ever_approved.contains(&s.id),
                })
                .collect(),
            edges: self.graph.edges().cloned().collect(),
            users: self.users.values().cloned().collect(),
            beliefs: self.beliefs.values().flat_map(|m| m.values().copied()).collect(),
            comments: self.comments.values().cloned().collect(),
        }
    }

    /// Validate a corpus completely and build the state it describes.
    pub(crate) fn from_corpus(corpus: &CorpusFile) -> Result<State> {
        let reject = |msg: String| StoreError::Corpus(msg);
        if corpus.schema_version != SCHEMA_VERSION {
            return Err(reject(format!(
                "schema version {} is not supported (expected {SCHEMA_VERSION})",
                corpus.schema_version
            )));
        }
        let mut state = State::new();

        for u in &corpus.users {
            if u.id.0 == 0 {
                return Err(reject(format!("user {}: id must be positive", u.id)));
            }
            credential::validate_username(&u.username)
                .map_err(|_| reject(format!("user {}: invalid username {:?}", u.id, u.username)))?;
            if state.usernames.insert(u.username.to_lowercase(), u.id).is_some() {
                return Err(reject(format!("user {}: username {:?} is taken", u.id, u.username)));
            }
            if state.users.insert(u.id, u.clone()).is_some() {
                return Err(reject(format!("user {}: duplicate id", u.id)));
            }
            state.next_user = state.next_user.max(u.id.0 + 1);
        }

        for r in &corpus.statements {
            let s = &r.statement;
            if !state.users.contains_key(&s.author) {
                return Err(reject(format!("statement {}: author {} is not a known user", s.id, s.author)));
            }
            if s.kind == StatementKind::Plain && (s.status == Status::Approved || r.was_approved) {
                state.ever_approved.insert(s.id);
            }
        }
        state.graph = Graph::from_parts(
            corpus.statements.iter().map(|r| r.statement.clone()),
            corpus.edges.iter().cloned(),
        )
        .map_err(|e| reject(e.to_string()))?;

        for b in &corpus.beliefs {
            if !state.users.contains_key(&b.user) {
                return Err(reject(format!("belief on {}: unknown user {}", b.statement, b.user)));
            }
            if state.graph.statement(b.statement).is_none() {
                return Err(reject(format!("belief of user {}: unknown statement {}", b.user, b.statement)));
            }
            let slot = state.beliefs.entry(b.statement).or_default();
            if slot.insert(b.user, *b).is_some() {
                return Err(reject(format!(
                    "user {} holds two beliefs on statement {}",
                    b.user, b.statement
                )));
            }
        }

        let mut seen: HashSet<CommentId> = HashSet::new();
        let mut by_statement: HashMap<_, Vec<CommentId>> = HashMap::new();
        let mut comments = BTreeMap::new();
        for c in &corpus.comments {
            if c.id.0 == 0 || !seen.insert(c.id) {
                return Err(reject(format!("comment {}: duplicate or zero id", c.id)));
            }
            if state.graph.statement(c.statement).is_none() {
                return Err(reject(format!("comment {}: unknown statement {}", c.id, c.statement)));
            }
            if !state.users.contains_key(&c.author) {
                return Err(reject(format!("comment {}: unknown author {}", c.id, c.author)));
            }
            let len = c.body.trim().chars().count();
            if len == 0 || len > MAX_COMMENT_CHARS {
                return Err(reject(format!(
                    "comment {}: body must be 1 to {MAX_COMMENT_CHARS} characters",
                    c.id
                )));
            }
            state.next_comment = state.next_comment.max(c.id.0 + 1);
            comments.insert(c.id, c.clone());
        }
        for c in comments.values() {
            by_statement.entry(c.statement).or_default().push(c.id);
        }
        state.comments = comments;
        state.comments_by_statement = by_statement;
        Ok(state)
    }
}
