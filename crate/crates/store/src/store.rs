use std::path::Path;
use std::sync::Arc;

use arbor_core::{
    Annotations, BeliefCounts, Edge, ExportFormat, Form, Graph, RelationRequest, SearchHit, Statement,
    StatementId, StatementKind, Status, UserId, View,
};
use serde::Serialize;

use crate::clock::{Clock, SystemClock};
use crate::corpus::{CorpusFile, CorpusSummary};
use crate::credential;
use crate::error::{Result, StoreError};
use crate::journal::Journal;
use crate::model::{Actor, Belief, Comment, Notification, NotificationId, User, UserStats};
use crate::state::{Command, Outcome, State};

pub const DEFAULT_DRAFT_THRESHOLD: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StoreConfig {
    /// Approved statements a user needs before new ones skip the draft stage.
    pub draft_threshold: u64,
    /// fsync every appended record.
    pub sync: bool,
}

impl Default for StoreConfig {
    fn default() -> Self {
        StoreConfig { draft_threshold: DEFAULT_DRAFT_THRESHOLD, sync: true }
    }
}

/// Comment as shown to readers: attributed by username.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommentView {
    pub id: crate::model::CommentId,
    pub statement: StatementId,
    pub author_username: String,
    pub body: String,
    pub created_at: arbor_core::Timestamp,
}

/// Full state dump used to compare stores byte for byte.
#[derive(Serialize)]
struct CanonicalDump<'a> {
    corpus: CorpusFile,
    notifications: Vec<&'a Notification>,
}

/// Community state over the argument graph with a single write path.
///
/// Every mutation becomes a journaled command. On open, the journal is
/// replayed, so a reopened store equals the one that was closed or killed.
pub struct Store {
    state: State,
    journal: Option<Journal>,
    clock: Arc<dyn Clock>,
    config: StoreConfig,
    poisoned: bool,
}

impl std::fmt::Debug for Store {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Store")
            .field("statements", &self.state.graph.statement_count())
            .field("edges", &self.state.graph.edge_count())
            .field("users", &self.state.users.len())
            .field("durable", &self.journal.is_some())
            .finish()
    }
}

impl Store {
    pub fn in_memory(config: StoreConfig) -> Store {
        Store::in_memory_with_clock(config, Arc::new(SystemClock))
    }

    pub fn in_memory_with_clock(config: StoreConfig, clock: Arc<dyn Clock>) -> Store {
        Store { state: State::new(), journal: None, clock, config, poisoned: false }
    }

    /// Open the store in `dir`, which must exist. Fails with
    /// [`StoreError::Locked`] while another handle has it open.
    pub fn open(dir: &Path, config: StoreConfig) -> Result<Store> {
        Store::open_with_clock(dir, config, Arc::new(SystemClock))
    }

    pub fn open_with_clock(dir: &Path, config: StoreConfig, clock: Arc<dyn Clock>) -> Result<Store> {
        let (journal, commands) = Journal::open(dir, config.sync)?;
        let mut state = State::new();
        for (i, cmd) in commands.iter().enumerate() {
            state
                .apply(cmd)
                .map_err(|e| StoreError::CorruptLog(format!("record {i} does not replay: {e}")))?;
        }
        Ok(Store { state, journal: Some(journal), clock, config, poisoned: false })
    }

    pub fn config(&self) -> StoreConfig {
        self.config
    }

    pub fn set_draft_threshold(&mut self, threshold: u64) {
        self.config.draft_threshold = threshold;
    }

    fn commit(&mut self, cmd: Command) -> Result<Outcome> {
        if self.poisoned {
            return Err(StoreError::Poisoned);
        }
        let outcome = self.state.apply(&cmd)?;
        if let Some(journal) = &mut self.journal {
            if let Err(e) = journal.append(&cmd) {
                // Memory is now ahead of disk; refuse further writes until reopened.
                self.poisoned = true;
                return Err(e);
            }
        }
        Ok(outcome)
    }

    pub fn graph(&self) -> &Graph {
        &self.state.graph
    }

    pub fn annotations(&self) -> &dyn Annotations {
        &self.state
    }

    // users

    pub fn register(&mut self, username: &str, credential: &str) -> Result<User> {
        credential::validate_username(username)?;
        let credential_digest = Some(credential::digest(credential)?);
        let at = self.clock.now();
        match self.commit(Command::Register { username: username.to_string(), credential_digest, at })? {
            Outcome::User(u) => Ok(u),
            _ => unreachable!(),
        }
    }

    pub fn authenticate(&self, username: &str, credential: &str) -> Result<User> {
        let user = self.state.user_by_name(username).map_err(|_| StoreError::InvalidLogin)?;
        match &user.credential_digest {
            Some(d) if credential::verify(d, credential) => Ok(user.clone()),
            _ => Err(StoreError::InvalidLogin),
        }
    }

    pub fn user(&self, id: UserId) -> Result<&User> {
        self.state.user(id)
    }

    pub fn user_by_name(&self, username: &str) -> Result<&User> {
        self.state.user_by_name(username)
    }

    pub fn set_moderator(&mut self, username: &str, value: bool) -> Result<User> {
        let user = self.state.user_by_name(username)?.id;
        match self.commit(Command::SetModerator { user, value })? {
            Outcome::User(u) => Ok(u),
            _ => unreachable!(),
        }
    }

    pub fn user_stats(&self, user: UserId) -> Result<UserStats> {
        self.state.user_stats(user)
    }

    // statements and relations

    /// New statements are drafts until the author is a moderator or has
    /// `draft_threshold` approved statements.
    pub fn submit_statement(
        &mut self,
        author: UserId,
        text_normal: &str,
        text_negated_custom: Option<&str>,
    ) -> Result<Statement> {
        let user = self.state.user(author)?;
        let status = if user.is_moderator || user.approved_count >= self.config.draft_threshold {
            Status::Approved
        } else {
            Status::Draft
        };
        let at = self.clock.now();
        match self.commit(Command::Submit {
            author,
            text_normal: text_normal.to_string(),
            text_negated_custom: text_negated_custom.map(str::to_string),
            status,
            at,
        })? {
            Outcome::Statement(s) => Ok(s),
            _ => unreachable!(),
        }
    }

    /// Add a relation and notify believers of the parent.
    pub fn add_relation(&mut self, actor: UserId, req: RelationRequest) -> Result<(Edge, Option<Statement>)> {
        let at = self.clock.now();
        match self.commit(Command::Relate {
            actor,
            child: req.child,
            child_form: req.child_form,
            parent: req.parent,
            parent_form: req.parent_form,
            polarity: req.polarity,
            at,
        })? {
            Outcome::Related(edge, relation) => Ok((edge, relation)),
            _ => unreachable!(),
        }
    }

    pub fn approve(&mut self, actor: Actor, statement: StatementId) -> Result<Statement> {
        self.set_status(actor, statement, Status::Approved)
    }

    /// Turn an approved statement back into a draft. Existing edges and
    /// beliefs stay; new edges onto it are refused.
    pub fn demote(&mut self, actor: Actor, statement: StatementId) -> Result<Statement> {
        self.set_status(actor, statement, Status::Draft)
    }

    fn set_status(&mut self, actor: Actor, statement: StatementId, status: Status) -> Result<Statement> {
        let at = self.clock.now();
        match self.commit(Command::SetStatus { actor, statement, status, at })? {
            Outcome::Statement(s) => Ok(s),
            _ => unreachable!(),
        }
    }

    pub fn statement(&self, id: StatementId) -> Result<&Statement> {
        Ok(self.state.graph.get(id)?)
    }

    pub fn view(&self, id: StatementId, form: Form) -> Result<View> {
        Ok(self.state.graph.view(id, form, &self.state)?)
    }

    pub fn search(&self, query: &str, limit: usize) -> Result<Vec<SearchHit>> {
        Ok(self.state.graph.search(query, limit)?)
    }

    /// Drafts of plain statements, oldest first.
    pub fn drafts(&self) -> Vec<&Statement> {
        let mut drafts: Vec<_> = self
            .state
            .graph
            .statements()
            .filter(|s| s.is_draft() && s.kind == StatementKind::Plain)
            .collect();
        drafts.sort_by_key(|s| (s.created_at, s.id));
        drafts
    }

    pub fn export_graph(&self, format: ExportFormat) -> String {
        self.state.graph.export(format, &self.state)
    }

    // beliefs

    pub fn set_belief(&mut self, user: UserId, statement: StatementId, form: Form) -> Result<Belief> {
        let at = self.clock.now();
        match self.commit(Command::SetBelief { user, statement, form, at })? {
            Outcome::Belief(b) => Ok(b),
            _ => unreachable!(),
        }
    }

    /// Dropping a belief also unsubscribes. Succeeds when there was none.
    pub fn remove_belief(&mut self, user: UserId, statement: StatementId) -> Result<()> {
        if self.state.belief(user, statement).is_none() {
            self.state.user(user)?;
            self.state.graph.get(statement)?;
            return Ok(());
        }
        self.commit(Command::RemoveBelief { user, statement }).map(|_| ())
    }

    pub fn belief(&self, user: UserId, statement: StatementId) -> Option<&Belief> {
        self.state.belief(user, statement)
    }

    pub fn belief_counts(&self, statement: StatementId) -> BeliefCounts {
        self.state.belief_counts(statement)
    }

    pub fn believers(&self, statement: StatementId) -> Vec<UserId> {
        self.state.believers(statement).collect()
    }

    // comments

    pub fn add_comment(&mut self, user: UserId, statement: StatementId, body: &str) -> Result<Comment> {
        let at = self.clock.now();
        match self.commit(Command::Comment { user, statement, body: body.to_string(), at })? {
            Outcome::Comment(c) => Ok(c),
            _ => unreachable!(),
        }
    }

    /// Oldest first, attributed by username.
    pub fn comments(&self, statement: StatementId) -> Result<Vec<CommentView>> {
        self.state.graph.get(statement)?;
        Ok(self
            .state
            .comments_on(statement)
            .into_iter()
            .map(|c| CommentView {
                id: c.id,
                statement: c.statement,
                author_username: self.state.users[&c.author].username.clone(),
                body: c.body.clone(),
                created_at: c.created_at,
            })
            .collect())
    }

    // notifications

    pub fn inbox(&self, user: UserId) -> Result<Vec<Notification>> {
        self.state.user(user)?;
        Ok(self.state.inbox(user))
    }

    pub fn unread_count(&self, user: UserId) -> usize {
        self.state.inbox(user).iter().filter(|n| !n.read).count()
    }

    pub fn mark_read(&mut self, user: UserId, notification: NotificationId) -> Result<()> {
        self.commit(Command::MarkRead { user, notification }).map(|_| ())
    }

    // corpus

    /// Load a corpus into this store, which must be empty. Nothing is kept
    /// if any part of the corpus is invalid.
    pub fn import(&mut self, corpus: CorpusFile) -> Result<CorpusSummary> {
        if !self.state.is_empty() {
            return Err(StoreError::NotEmpty);
        }
        // Validate before journaling so a rejected file leaves no record.
        State::from_corpus(&corpus)?;
        let summary = corpus.summary();
        self.commit(Command::Import { corpus: Box::new(corpus) })?;
        Ok(summary)
    }

    pub fn export_corpus(&self) -> CorpusFile {
        self.state.to_corpus()
    }

    /// Everything durable, as deterministic JSON.
    pub fn canonical_dump(&self) -> String {
        let dump = CanonicalDump {
            corpus: self.state.to_corpus(),
            notifications: self.state.notifications.values().collect(),
        };
        serde_json::to_string_pretty(&dump).expect("dump serializes")
    }
}
